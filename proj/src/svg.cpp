#include "mwfpi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mwfpi/error.hpp"

namespace mwfpi::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
};

void frame(std::ofstream& out, const Axes& a, const Range& xr, const Range& yr, bool log_y) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(a.title)
      << "</text>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(a.x_label) << "</text>\n";
  out << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(a.y_label) << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = i / 4.0;
    const double x = kLeft + fx * pw;
    out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << num(xr.lo + fx * (xr.hi - xr.lo)) << "</text>\n";
    const double y = kTop + ph - fx * ph;
    const double v = yr.lo + fx * (yr.hi - yr.lo);
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << (log_y ? "1e" + num(v) : num(v)) << "</text>\n";
  }
}

}  // namespace

void line_plot(const std::string& path, const Axes& axes, const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  auto ty = [&](double y) { return axes.log_y ? (y > 0 ? std::log10(y) : std::nan("")) : y; };
  Range xr, yr;
  for (const auto& s : series) {
    for (double x : s.x) xr.add(x);
    for (double y : s.y) yr.add(ty(y));
  }
  xr.pad();
  yr.pad();
  frame(out, axes, xr, yr, axes.log_y);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % 8];
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : " M") + num(px(s.x[i])) + "," + num(py(y));
      pen = true;
    }
    out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void heatmap(const std::string& path, const Axes& axes, const std::vector<double>& cols,
             const std::vector<double>& rows, const std::vector<double>& values, bool log_scale) {
  if (values.size() != rows.size() * cols.size()) throw Error(ErrorKind::InvalidParameter, "heatmap size mismatch");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  auto tv = [&](double v) { return log_scale ? (v > 0 ? std::log10(v) : std::nan("")) : v; };
  Range xr, yr, vr;
  for (double c : cols) xr.add(c);
  for (double r : rows) yr.add(r);
  for (double v : values) vr.add(tv(v));
  xr.pad();
  yr.pad();
  vr.pad();
  frame(out, axes, xr, yr, false);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double cw = pw / static_cast<double>(std::max<std::size_t>(1, cols.size()));
  const double rh = ph / static_cast<double>(std::max<std::size_t>(1, rows.size()));
  auto color = [&](double v) {
    if (!std::isfinite(v)) return std::string("#bbbbbb");
    const double f = std::clamp((v - vr.lo) / (vr.hi - vr.lo), 0.0, 1.0);
    // dark blue -> yellow
    const int r = static_cast<int>(255 * std::clamp(1.6 * f - 0.3, 0.0, 1.0));
    const int g = static_cast<int>(255 * std::clamp(0.2 + 0.8 * f, 0.0, 1.0));
    const int b = static_cast<int>(255 * std::clamp(0.6 - 0.6 * f, 0.0, 1.0));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out << "<rect x=\"" << num(kLeft + cw * static_cast<double>(j)) << "\" y=\""
          << num(kTop + ph - rh * static_cast<double>(i + 1)) << "\" width=\"" << num(cw + 0.5) << "\" height=\""
          << num(rh + 0.5) << "\" fill=\"" << color(tv(values[i * cols.size() + j])) << "\"/>\n";
    }
  }
  for (int k = 0; k <= 10; ++k) {
    const double f = k / 10.0;
    const double y = kTop + ph - f * ph;
    out << "<rect x=\"" << kWidth - kRight + 20 << "\" y=\"" << num(y - ph / 10) << "\" width=\"20\" height=\""
        << num(ph / 10 + 0.5) << "\" fill=\"" << color(vr.lo + f * (vr.hi - vr.lo)) << "\"/>\n";
    if (k % 2 == 0) {
      const double v = vr.lo + f * (vr.hi - vr.lo);
      out << "<text x=\"" << kWidth - kRight + 45 << "\" y=\"" << num(y + 4) << "\">"
          << (log_scale ? "1e" + num(v) : num(v)) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace mwfpi::svg
