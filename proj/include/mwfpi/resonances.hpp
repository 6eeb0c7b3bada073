#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mwfpi/core_model.hpp"
#include "mwfpi/parallel.hpp"
#include "mwfpi/potentials.hpp"

namespace mwfpi {

/// Quasi-bound state E_r - i width/2 in reduced units.
struct Resonance {
  double energy = 0;
  double width = 0;
  double theta = 0;
  double plateau_width = 0;  // total theta range over which the plateau test passed
  int index = 0;             // 0-based, ordered by energy
  int track_id = -1;
  double localization = 1;   // eigenvector weight inside the cavity region

  /// hbar / Gamma in units of hbar / V_b.
  double lifetime() const { return 1.0 / width; }
  /// arctan(Gamma / 2E_r); must stay below 2 theta.
  double angle() const;
};

struct ScalingSettings {
  double theta = 0.15;
  std::size_t basis_size = 512;
  double box_half_width = 80.0;
  double e_max = 1.2;
  double e_min = 0.0;
  double plateau_step = 0.1;       // relative theta variation
  double min_localization = 0.5;
  bool check_basis = false;
};

/// Lagrange-sine mesh on (a, b): x_i = a + i (b - a) / (N + 1), i = 1..N.
std::vector<double> sine_mesh(double a, double b, std::size_t n);

/// H = stiffness T e^{-2i theta} + diag(v(x_i e^{i theta})) on the sine mesh
/// of (a, b). T is the exact second-derivative matrix of the sine basis.
Eigen::MatrixXcd complex_scaled_hamiltonian(const PotentialDescriptor& v, double stiffness, double theta,
                                            std::size_t basis_size, double a, double b);
/// Cavity version on the symmetric box (-L, L), checking theta and the box.
Eigen::MatrixXcd complex_scaled_hamiltonian(const Cavity& cavity, double theta, std::size_t basis_size,
                                            double box_half_width);

struct ResonanceSet {
  std::vector<Resonance> resonances;
  double basis_shift = 0;  // largest |dE_r| on doubling the basis, if checked
  bool basis_converged = true;
};

/// Eigenvalues that are stable under theta -> theta (1 +- plateau_step),
/// localized in the cavity and inside [e_min, e_max]. For a tilted cavity
/// the localization window extends 3 widths past the downhill barrier.
ResonanceSet find_resonances(const Cavity& cavity, const ScalingSettings& settings);

struct ResonanceTrack {
  int id = 0;
  std::vector<double> tilts;
  std::vector<double> energies;
  std::vector<double> widths;
  std::vector<bool> crossing;    // true where another track competed for the same eigenvalue
  double triangular_level = 0;   // triangular-well level at the largest |tilt|
  double triangular_distance = 0;
};

/// Follows the g = 0 resonances outward in both tilt directions. Each step
/// predicts linearly from the last two points and pairs with the nearest
/// eigenvalue; a match farther than half the local level spacing is a
/// TrackLost error. Levels of the triangular well with its wall at the
/// downhill barrier (|tilt| used for both signs) are attached at the ends.
std::vector<ResonanceTrack> track_vs_gravity(const Cavity& cavity, const std::vector<double>& tilts,
                                             const ScalingSettings& settings, std::size_t n_tracks,
                                             Execution exec = Execution::Parallel);

/// Triangular-well level n (0-based) for a wall at the downhill barrier:
/// tilt * x_wall + |a_{n+1}| (stiffness tilt^2)^{1/3}.
double triangular_level(const Cavity& cavity, int n);

struct SpectrumModel {
  struct Component {
    double energy;
    double width;
  };
  std::vector<Component> components;
};

SpectrumModel lorentzian_model(const std::vector<Resonance>& resonances);
double lorentzian(const SpectrumModel::Component& c, double e);
/// Largest component value at e.
double eval(const SpectrumModel& model, double e);

}  // namespace mwfpi
