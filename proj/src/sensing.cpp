#include "mwfpi/sensing.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace mwfpi {

TransmissionObservables project(const WaveFunction& psi_in, const Cavity& cavity) {
  const WaveFunction psi = psi_in.representation() == Representation::Position ? psi_in : to_position(psi_in);
  const Grid& g = *psi.grid();
  double r = 0, l = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.position(i);
    if (x >= cavity.right_barrier()) r += std::norm(psi[i]);
    if (x <= cavity.left_barrier()) l += std::norm(psi[i]);
  }
  TransmissionObservables o;
  o.T_R = r * g.dx();
  o.T_L = l * g.dx();
  o.T_plus = o.T_L + o.T_R;
  o.T_minus = o.T_L - o.T_R;
  o.var_T_R = o.T_R * (1.0 - o.T_R);
  o.var_T_minus = o.T_plus - o.T_minus * o.T_minus;
  return o;
}

Map2D::Map2D(std::vector<double> r, std::vector<double> c)
    : rows(std::move(r)), cols(std::move(c)), values(rows.size() * cols.size(), 0.0) {}

namespace {
double diff(const std::vector<double>& axis, std::size_t k, auto value) {
  const std::size_t n = axis.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  if (k == 0) return (value(1) - value(0)) / (axis[1] - axis[0]);
  if (k == n - 1) return (value(n - 1) - value(n - 2)) / (axis[n - 1] - axis[n - 2]);
  return (value(k + 1) - value(k - 1)) / (axis[k + 1] - axis[k - 1]);
}

void check_regular(const Map2D& m, bool need_cols = true) {
  if (m.rows.size() < 3 || (need_cols && m.cols.size() < 3)) {
    throw Error(ErrorKind::InvalidParameter, "sensitivity maps need at least 3 points per differentiated axis");
  }
}
}  // namespace

Map2D derivative_rows(const Map2D& m) {
  Map2D d(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols.size(); ++j)
      d.at(i, j) = diff(m.rows, i, [&](std::size_t k) { return m.at(k, j); });
  return d;
}

Map2D derivative_cols(const Map2D& m) {
  Map2D d(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols.size(); ++j)
      d.at(i, j) = diff(m.cols, j, [&](std::size_t k) { return m.at(i, k); });
  return d;
}

const char* to_string(SensitivityVariant v) {
  switch (v) {
    case SensitivityVariant::Full: return "full";
    case SensitivityVariant::Intrinsic: return "intrinsic";
    case SensitivityVariant::Asymmetric: return "asymmetric";
  }
  return "?";
}

SensitivityMap rel_uncertainty_R(const Map2D& T_R, double x0, bool include_propagation) {
  check_regular(T_R);
  SensitivityMap s;
  s.variant = include_propagation ? SensitivityVariant::Full : SensitivityVariant::Intrinsic;
  s.T = T_R;
  s.dT = Map2D(T_R.rows, T_R.cols);
  s.delta_g = Map2D(T_R.rows, T_R.cols);
  const Map2D dg = derivative_rows(T_R);
  const Map2D de = derivative_cols(T_R);
  for (std::size_t i = 0; i < T_R.rows.size(); ++i) {
    const double G = T_R.rows[i];
    for (std::size_t j = 0; j < T_R.cols.size(); ++j) {
      const double t = T_R.at(i, j);
      const double num = std::sqrt(std::max(0.0, t * (1.0 - t)));
      const double a = G * dg.at(i, j);
      const double b = include_propagation ? G * x0 * de.at(i, j) : 0.0;
      const double den = std::sqrt(a * a + b * b);
      s.dT.at(i, j) = num;
      s.delta_g.at(i, j) = den < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : num / den;
    }
  }
  return s;
}

SensitivityMap rel_uncertainty_minus(const Map2D& T_minus, const Map2D& T_plus) {
  check_regular(T_minus, false);
  if (T_plus.rows != T_minus.rows || T_plus.cols != T_minus.cols) {
    throw Error(ErrorKind::GridMismatch, "T_+ and T_- maps must share axes");
  }
  SensitivityMap s;
  s.variant = SensitivityVariant::Asymmetric;
  s.T = T_minus;
  s.dT = Map2D(T_minus.rows, T_minus.cols);
  s.delta_g = Map2D(T_minus.rows, T_minus.cols);
  const Map2D dg = derivative_rows(T_minus);
  for (std::size_t i = 0; i < T_minus.rows.size(); ++i) {
    const double G = T_minus.rows[i];
    for (std::size_t j = 0; j < T_minus.cols.size(); ++j) {
      const double tm = T_minus.at(i, j);
      const double num = std::sqrt(std::max(0.0, T_plus.at(i, j) - tm * tm));
      const double den = std::abs(G * dg.at(i, j));
      s.dT.at(i, j) = num;
      s.delta_g.at(i, j) = den < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : num / den;
    }
  }
  return s;
}

MapOptimum map_minimum(const Map2D& m) {
  MapOptimum best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      const double v = m.at(i, j);
      if (std::isfinite(v) && v < best.value) best = {v, i, j};
    }
  if (!std::isfinite(best.value)) throw Error(ErrorKind::NotApplicable, "map has no finite entries");
  return best;
}

double per_ensemble(double scaled, double n_atoms, double n_shots) { return scaled / std::sqrt(n_atoms * n_shots); }

double epsilon_fw_residual(double eps) {
  const double h = 0.5 * eps;
  const double x = 0.5 * constants::pi * std::sqrt(1.0 + h * h);
  const double sinc = std::sin(x) / x;
  return 0.25 * constants::pi * constants::pi * sinc * sinc - 0.5;
}

double epsilon_fw() {
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(epsilon_fw_residual, 0.0, 4.0, tol, iters);
  return 0.5 * (r.first + r.second);
}

double bragg_rabi(double energy_J, double width_J, double mass, double k_bragg) {
  if (!(energy_J > 0 && width_J > 0)) throw Error(ErrorKind::InvalidParameter, "E_r and Gamma must be positive");
  return width_J * k_bragg / (2.0 * std::sqrt(2.0 * mass * energy_J) * epsilon_fw());
}

double fit_barrier_height(const std::vector<BraggRow>& rows, double mass, double k_bragg) {
  // Omega_i = sqrt(V_b) a_i; minimize sum (sqrt(V_b) a_i / Omega_i - 1)^2.
  double s1 = 0, s2 = 0;
  for (const auto& r : rows) {
    const double a = bragg_rabi(r.energy_over_vb, r.width_over_vb, mass, k_bragg) / (2.0 * constants::pi);
    const double u = a / r.omega_over_2pi_hz;
    s1 += u;
    s2 += u * u;
  }
  const double root = s1 / s2;
  return root * root;
}

const std::vector<BraggRow>& reference_bragg_rows() {
  static const std::vector<BraggRow> rows = {
      {0.03, 2.23e-5, 0.04}, {0.10, 2.61e-4, 0.24}, {0.23, 1.44e-3, 0.89}, {0.39, 5.22e-3, 2.45},
      {0.60, 0.02, 6.46},    {0.83, 0.05, 15.45},   {1.11, 0.11, 31.99},
  };
  return rows;
}

}  // namespace mwfpi
