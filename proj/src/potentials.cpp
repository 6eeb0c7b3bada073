#include "mwfpi/potentials.hpp"

#include <cmath>

namespace mwfpi {

double PotentialDescriptor::operator()(double x) const {
  for (const auto& w : walls) {
    if (w.blocks_left ? x <= w.position : x >= w.position) return w.cap;
  }
  double v = slope * (x - slope_origin);
  for (const auto& b : barriers) {
    const double u = (x - b.center) / b.width;
    v += b.height * std::exp(-0.5 * u * u);
  }
  return v;
}

cplx PotentialDescriptor::operator()(cplx z) const {
  if (!walls.empty()) {
    throw Error(ErrorKind::InvalidParameter, "hard walls have no analytic continuation");
  }
  cplx v = slope * (z - slope_origin);
  for (const auto& b : barriers) {
    const cplx u = (z - b.center) / b.width;
    v += b.height * std::exp(-0.5 * u * u);
  }
  return v;
}

PotentialDescriptor cavity_descriptor(const Cavity& cavity) {
  PotentialDescriptor d;
  d.slope = cavity.tilt;
  d.barriers = {{cavity.left_barrier(), 1.0, 1.0}, {cavity.right_barrier(), 1.0, 1.0}};
  return d;
}

PotentialField cavity_potential(const Cavity& cavity, const GridPtr& grid) {
  PotentialField f{grid, std::vector<double>(grid->size()), cavity_descriptor(cavity)};
  for (std::size_t i = 0; i < grid->size(); ++i) f.samples[i] = f.descriptor(grid->position(i));
  return f;
}

double cavity_potential_si(const ModelParams& params, double z) {
  const double zp = params.barrier_position();
  const double s2 = 2.0 * params.barrier_width_m * params.barrier_width_m;
  return params.mass_kg * params.gravity_m_s2 * z +
         params.barrier_height_J * (std::exp(-(z + zp) * (z + zp) / s2) + std::exp(-(z - zp) * (z - zp) / s2));
}

PotentialField triangular_potential(double x_wall, double tilt, const GridPtr& grid, double cap) {
  if (tilt == 0.0) throw Error(ErrorKind::NoBoundStates, "triangular well needs a nonzero tilt");
  PotentialDescriptor d;
  const bool open_right = tilt > 0;
  d.slope = open_right ? std::abs(tilt) : -std::abs(tilt);
  d.slope_origin = x_wall;
  d.walls.push_back({x_wall, open_right, cap});
  PotentialField f{grid, std::vector<double>(grid->size()), d};
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double x = grid->position(i);
    // The wall sample itself is the zero of the linear part.
    f.samples[i] = x == x_wall ? 0.0 : d(x);
  }
  return f;
}

std::vector<double> triangular_eigenenergies(double g, double mass, int n_levels) {
  if (g == 0.0) throw Error(ErrorKind::NoBoundStates, "triangular well needs g != 0");
  if (n_levels < 1 || !(mass > 0)) throw Error(ErrorKind::InvalidParameter, "need n_levels >= 1 and m > 0");
  const double scale = std::cbrt(constants::hbar * constants::hbar * mass * g * g / 2.0);
  auto zeros = airy_zero_magnitudes(n_levels);
  for (auto& z : zeros) z *= scale;
  return zeros;
}

std::vector<double> triangular_eigenenergies_reduced(double tilt, double stiffness, int n_levels) {
  if (tilt == 0.0) throw Error(ErrorKind::NoBoundStates, "triangular well needs a nonzero tilt");
  if (n_levels < 1) throw Error(ErrorKind::InvalidParameter, "need n_levels >= 1");
  const double scale = std::cbrt(stiffness * tilt * tilt);
  auto zeros = airy_zero_magnitudes(n_levels);
  for (auto& z : zeros) z *= scale;
  return zeros;
}

}  // namespace mwfpi
