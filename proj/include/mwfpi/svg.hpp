#pragma once

#include <string>
#include <vector>

namespace mwfpi::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

/// Static line plot; non-finite points break the line.
void line_plot(const std::string& path, const Axes& axes, const std::vector<Series>& series);

/// Heatmap of values[row * cols.size() + col] with rows on the y axis.
/// Non-finite cells are drawn grey; log_scale colors by log10(value).
void heatmap(const std::string& path, const Axes& axes, const std::vector<double>& cols,
             const std::vector<double>& rows, const std::vector<double>& values, bool log_scale = false);

}  // namespace mwfpi::svg
