#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mwfpi/error.hpp"

namespace mwfpi {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double rb87_mass = 1.4431609e-25;   // kg
inline constexpr double rb87_recoil_velocity = 5.8845e-3;  // m/s, D2 line
// Barrier height that places the g = 0 cavity resonances at the reference
// E_r/V_b values for sigma_b = 1 um, d = 15 um and the Rb-87 mass. The
// older value 1.42e-25 J is kept available as an explicit override.
inline constexpr double calibrated_barrier_height = 3.78e-32;  // J
inline constexpr double quoted_barrier_height = 1.42e-25;      // J
}  // namespace constants

/// Physical inputs in SI units. Everything downstream works in reduced units
/// (length sigma_b, energy V_b, time hbar/V_b); see Scales.
struct ModelParams {
  double mass_kg = constants::rb87_mass;
  double gravity_m_s2 = 0.0;
  double barrier_height_J = constants::calibrated_barrier_height;
  double barrier_width_m = 1e-6;
  double cavity_length_m = 15e-6;
  // 1D mean-field coupling in J*m.
  double interaction_J_m = 0.0;
  double packet_width_m = 12e-6;
  double packet_center_m = -49.5e-6;
  double packet_momentum_kg_m_s = 0.0;
  double recoil_velocity_m_s = constants::rb87_recoil_velocity;
  double bragg_wavevector_1_m = 2.0 * constants::rb87_mass * constants::rb87_recoil_velocity / constants::hbar;

  /// Defaults for sigma_b = 1 um, d = 15 um, Rb-87 and the packet center
  /// derived from the width via default_packet_center().
  static ModelParams defaults();

  void validate() const;

  /// z_+ = 3 sigma_b + d/2; z_- = -z_+.
  double barrier_position() const { return 3.0 * barrier_width_m + 0.5 * cavity_length_m; }
  /// z_0 = -3 dz - 6 sigma_b - d/2.
  double default_packet_center() const {
    return -3.0 * packet_width_m - 6.0 * barrier_width_m - 0.5 * cavity_length_m;
  }
  double default_bragg_wavevector() const {
    return 2.0 * mass_kg * recoil_velocity_m_s / constants::hbar;
  }
};

/// Unit system: L0 = sigma_b, E0 = V_b, T0 = hbar/E0, P0 = sqrt(2 m E0),
/// stiffness = hbar^2 / (2 m sigma_b^2 V_b) is the kinetic prefactor in
/// reduced units (H = -stiffness d^2/dx^2 + v(x)).
struct Scales {
  double length_unit = 0;
  double energy_unit = 0;
  double time_unit = 0;
  double momentum_unit = 0;
  double stiffness = 0;
  double mass = 0;

  double to_reduced_length(double z) const { return z / length_unit; }
  double to_si_length(double x) const { return x * length_unit; }
  double to_reduced_energy(double e) const { return e / energy_unit; }
  double to_si_energy(double e) const { return e * energy_unit; }
  double to_reduced_time(double t) const { return t / time_unit; }
  double to_si_time(double t) const { return t * time_unit; }
  /// Momentum p -> reduced wavenumber k = p L0 / hbar (conjugate to x).
  double to_wavenumber(double p) const { return p * length_unit / constants::hbar; }
  double to_si_momentum(double k) const { return k * constants::hbar / length_unit; }
  /// Acceleration g -> reduced tilt m g L0 / E0 (potential slope per L0).
  double to_tilt(double g) const { return mass * g * length_unit / energy_unit; }
  double to_si_gravity(double tilt) const { return tilt * energy_unit / (mass * length_unit); }
  /// gamma [J m] -> reduced coupling gamma / (E0 L0).
  double to_reduced_interaction(double gamma) const { return gamma / (energy_unit * length_unit); }
};

Scales make_scales(const ModelParams& params);

/// Reduced double-Gaussian cavity: v(x) = tilt*x + exp(-(x-x_-)^2/2) + exp(-(x-x_+)^2/2)
/// with barriers of unit height and width.
struct Cavity {
  double stiffness = 1.0;
  double tilt = 0.0;
  double barrier_center = 10.5;  // x_+; x_- = -x_+
  double nonlinearity = 0.0;

  double left_barrier() const { return -barrier_center; }
  double right_barrier() const { return barrier_center; }
};

/// Reduced Gaussian packet: center x0, width dx (position std-dev) and
/// carrier wavenumber k0.
struct PacketSpec {
  double width = 12.0;
  double center = -49.5;
  double wavenumber = 0.0;
};

Cavity reduce_cavity(const ModelParams& params, const Scales& scales);
PacketSpec reduce_packet(const ModelParams& params, const Scales& scales);

/// Uniform periodic grid on [x_min, x_max) with n = 2^m points and its
/// conjugate wavenumber grid. Wavenumbers are exposed in ascending order;
/// fft_index() maps an ascending index to the transform's native layout.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return dx_; }
  double dk() const { return dk_; }
  std::size_t size() const { return n_; }

  double position(std::size_t i) const { return positions_[i]; }
  std::span<const double> positions() const { return positions_; }
  double wavenumber(std::size_t j) const { return wavenumbers_[j]; }
  std::span<const double> wavenumbers() const { return wavenumbers_; }
  /// Native FFT index of ascending wavenumber index j.
  std::size_t fft_index(std::size_t j) const { return (j + n_ / 2) % n_; }
  /// Wavenumber at native FFT index m.
  double native_wavenumber(std::size_t m) const {
    return m < n_ / 2 ? dk_ * static_cast<double>(m) : dk_ * (static_cast<double>(m) - static_cast<double>(n_));
  }
  /// Index of the grid point at or left of x (clamped).
  std::size_t index_at_or_below(double x) const;

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
  double dk_;
  std::vector<double> positions_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(double x_min, double x_max, std::size_t n_points);

enum class Representation { Position, Momentum };

class WaveFunction {
 public:
  WaveFunction(GridPtr grid, std::vector<cplx> amplitudes, Representation rep = Representation::Position);

  const GridPtr& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }
  std::vector<cplx> take_amplitudes() && { return std::move(amp_); }
  std::size_t size() const { return amp_.size(); }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }

  /// Sum |psi|^2 times dx (position) or dk (momentum).
  double norm() const;
  /// Rescales to unit norm; returns the norm before rescaling.
  double normalize();
  std::vector<double> density() const;

 private:
  GridPtr grid_;
  std::vector<cplx> amp_;
  Representation rep_;
};

/// Continuous-transform convention psi~(k) = (2 pi)^-1/2 \int psi(x) e^{-ikx} dx,
/// sampled on the ascending wavenumber grid.
WaveFunction to_momentum(const WaveFunction& psi);
WaveFunction to_position(const WaveFunction& psi);

/// Integral of |psi|^2 over [a, b] in position representation (left Riemann
/// sum over the grid points inside the interval).
double population(const WaveFunction& psi, double a, double b);

bool is_power_of_two(std::size_t n);

}  // namespace mwfpi
