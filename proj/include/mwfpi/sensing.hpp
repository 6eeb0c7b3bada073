#pragma once

#include <string>
#include <vector>

#include "mwfpi/core_model.hpp"

namespace mwfpi {

struct TransmissionObservables {
  double T_R = 0;
  double T_L = 0;
  double T_plus = 0;
  double T_minus = 0;
  double var_T_R = 0;
  double var_T_minus = 0;
};

/// Quadratures of |psi|^2 over [x_+, inf) and (-inf, x_-].
TransmissionObservables project(const WaveFunction& psi, const Cavity& cavity);

/// Row-major map over (tilt, energy-or-kick): values[i * cols + j].
struct Map2D {
  std::vector<double> rows;  // tilt axis
  std::vector<double> cols;  // E/V_b or kick axis
  std::vector<double> values;

  Map2D() = default;
  Map2D(std::vector<double> r, std::vector<double> c);
  double& at(std::size_t i, std::size_t j) { return values[i * cols.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols.size() + j]; }
};

/// Central differences inside, one-sided at the edges.
Map2D derivative_rows(const Map2D& m);
Map2D derivative_cols(const Map2D& m);

enum class SensitivityVariant { Full, Intrinsic, Asymmetric };
const char* to_string(SensitivityVariant v);

/// sqrt(N) sqrt(nu) delta_g / g for a single particle and shot. NaN marks
/// points where the denominator falls below 1e-12.
struct SensitivityMap {
  Map2D T;
  Map2D dT;
  Map2D delta_g;
  SensitivityVariant variant = SensitivityVariant::Full;
  std::string stencil = "central, one-sided at edges";
};

/// delta_g_R = sqrt(T(1-T)) / sqrt((G dT/dG)^2 + (G x0 dT/dE)^2); the second
/// term is dropped when include_propagation is false.
SensitivityMap rel_uncertainty_R(const Map2D& T_R, double x0, bool include_propagation);

/// delta_g_- = sqrt(T_+ - T_-^2) / |G dT_-/dG|.
SensitivityMap rel_uncertainty_minus(const Map2D& T_minus, const Map2D& T_plus);

struct MapOptimum {
  double value = 0;
  std::size_t row = 0;
  std::size_t col = 0;
};
/// Smallest finite entry (throws if none).
MapOptimum map_minimum(const Map2D& m);

/// Scaled value divided by sqrt(N nu).
double per_ensemble(double scaled, double n_atoms, double n_shots);

/// Full width at half maximum, in units of Omega, of the mirror-pulse line
/// P(d) = (pi/2)^2 sinc^2(pi/2 sqrt(1 + d^2)), d = detuning / Omega. Solved
/// as the smallest root on (0, 4) of epsilon_fw_residual.
double epsilon_fw();
/// P(eps / 2) - 1/2.
double epsilon_fw_residual(double eps);

/// Omega = Gamma k_B / (2 sqrt(2 m E_r) eps_FW) in rad/s (SI inputs).
double bragg_rabi(double energy_J, double width_J, double mass, double k_bragg);

struct BraggRow {
  double energy_over_vb;
  double width_over_vb;
  double omega_over_2pi_hz;
};

/// Barrier height that best reproduces the rows' Omega column in the
/// relative least-squares sense, given their dimensionless E_r and Gamma.
double fit_barrier_height(const std::vector<BraggRow>& rows, double mass, double k_bragg);

/// Reference rows (E_r/V_b, Gamma/V_b, Omega/2pi).
const std::vector<BraggRow>& reference_bragg_rows();

}  // namespace mwfpi
