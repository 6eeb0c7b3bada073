#pragma once

#include <vector>

#include "mwfpi/core_model.hpp"

namespace mwfpi {

/// Analytic form of a reduced potential: a linear term, Gaussian barriers of
/// unit width and a hard wall represented by a finite cap.
struct PotentialDescriptor {
  struct Barrier {
    double center = 0;
    double height = 1;
    double width = 1;
  };
  struct Wall {
    double position = 0;
    bool blocks_left = true;  // cap applies at and beyond the wall on this side
    double cap = 1e3;
  };

  double slope = 0;          // coefficient of x
  double slope_origin = 0;   // linear term is slope * (x - slope_origin)
  std::vector<Barrier> barriers;
  std::vector<Wall> walls;

  double operator()(double x) const;
  /// Continuation to complex coordinates, used under complex scaling. Walls
  /// are not analytic and are rejected.
  cplx operator()(cplx z) const;
};

/// Potential samples on a grid together with the analytic descriptor that
/// produced them. Values are in units of V_b.
struct PotentialField {
  GridPtr grid;
  std::vector<double> samples;
  PotentialDescriptor descriptor;
};

PotentialDescriptor cavity_descriptor(const Cavity& cavity);

/// v(x) = tilt x + exp(-(x-x_-)^2/2) + exp(-(x-x_+)^2/2)
PotentialField cavity_potential(const Cavity& cavity, const GridPtr& grid);

/// SI convenience: same potential in joules at position z [m].
double cavity_potential_si(const ModelParams& params, double z);

/// Triangular well with a hard wall at x_wall: v = |tilt| (x - x_wall) on the
/// open side, cap (default 1e3 V_b) at and beyond the wall. For tilt > 0 the
/// open side is x > x_wall; for tilt < 0 it is mirrored.
PotentialField triangular_potential(double x_wall, double tilt, const GridPtr& grid, double cap = 1e3);

/// Magnitudes of the first n zeros of Ai, |a_1| < |a_2| < ...
std::vector<double> airy_zero_magnitudes(int n);
/// Ai(x) for real x.
double airy_ai(double x);

/// E_n = |a_n| (hbar^2 m g^2 / 2)^{1/3} in joules.
std::vector<double> triangular_eigenenergies(double g, double mass, int n_levels);
/// Reduced form: E_n / V_b = |a_n| (stiffness tilt^2)^{1/3}.
std::vector<double> triangular_eigenenergies_reduced(double tilt, double stiffness, int n_levels);

}  // namespace mwfpi
