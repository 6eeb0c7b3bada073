#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "mwfpi/core_model.hpp"
#include "mwfpi/parallel.hpp"
#include "mwfpi/potentials.hpp"

namespace mwfpi {

/// Maps plane-wave amplitudes (A, B) of A e^{ikx} + B e^{-ikx} on the left of
/// the window to those on the right. Reduced units, k = sqrt(E / stiffness).
struct TransferMatrix {
  std::array<cplx, 4> m{1, 0, 0, 1};  // row-major
  double energy = 0;
  std::size_t n_steps = 0;
  double window_lo = 0;
  double window_hi = 0;

  cplx operator()(int r, int c) const { return m[2 * r + c]; }
  cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  /// |tau|^2 with tau = 1 / M22 for incidence from the left.
  double transmission() const { return 1.0 / std::norm(m[3]); }
  /// |rho|^2 = |M21 / M22|^2.
  double reflection() const { return std::norm(m[2] / m[3]); }
};

TransferMatrix operator*(const TransferMatrix& later, const TransferMatrix& earlier);

/// Constant potential v_step on [x_a, x_b]. Below the step the evanescent
/// branch is used; the q -> 0 limit is taken by series.
TransferMatrix step_matrix(double energy, double v_step, double x_a, double x_b, double stiffness);
/// Same on [0, width].
inline TransferMatrix step_matrix(double energy, double v_step, double width, double stiffness) {
  return step_matrix(energy, v_step, 0.0, width, stiffness);
}

/// Staircase of n_steps equal slabs on [a, b] sampling v at midpoints.
TransferMatrix window_matrix(double energy, const std::function<double(double)>& v, double a, double b,
                             std::size_t n_steps, double stiffness);

/// Default window [x_- - 6, x_+ + 6] in units of the barrier width.
std::pair<double, double> cavity_window(const Cavity& cavity);
/// Number of slabs giving a 0.27 sigma_b step over the default window.
std::size_t default_cavity_steps(const Cavity& cavity);

/// Requires tilt == 0.
TransferMatrix cavity_matrix(double energy, const Cavity& cavity, std::size_t n_steps);

struct TransmissionSpectrum {
  std::vector<double> energies;
  std::vector<double> transmission;
  std::size_t n_steps = 0;
  bool converged = false;
};

std::vector<double> transmission_values(const Cavity& cavity, const std::vector<double>& energies,
                                        std::size_t n_steps, Execution exec = Execution::Parallel);

/// Doubles n_steps from the default until the largest change over the
/// energy grid is below tol; throws NotConverged after 20 doublings.
TransmissionSpectrum transmission_spectrum(const Cavity& cavity, const std::vector<double>& energies,
                                           double tol = 1e-6, Execution exec = Execution::Parallel);

/// sum_k |tau(k)|^2 |psi~(k)|^2 dk over the momentum grid. The state must be
/// right-moving (negative-momentum weight < 1e-6).
double averaged_transmission(const std::function<double(double)>& tau_sq_of_k, const WaveFunction& psi0);
/// Uses the cavity transfer matrix at n_steps, skipping wavenumbers whose
/// weight is below 1e-16 of the peak. Requires tilt == 0.
double averaged_transmission(const Cavity& cavity, const WaveFunction& psi0, std::size_t n_steps,
                             Execution exec = Execution::Parallel);

}  // namespace mwfpi
