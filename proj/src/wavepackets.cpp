#include "mwfpi/wavepackets.hpp"

#include <cmath>

namespace mwfpi {

namespace {
void check_fits(const PacketSpec& spec, const Grid& g) {
  const double reach = 6.0 * spec.width;
  if (spec.center - g.x_min() <= reach || g.x_max() - spec.center <= reach) {
    throw Error(ErrorKind::PacketTooWide, "packet center must lie more than 6 widths from the grid edges");
  }
  const double amp0 = std::pow(2.0 * constants::pi * spec.width * spec.width, -0.25);
  for (double edge : {g.x_min(), g.x_max() - g.dx()}) {
    const double u = (edge - spec.center) / spec.width;
    if (amp0 * std::exp(-0.25 * u * u) >= 1e-12) {
      throw Error(ErrorKind::PacketTooWide, "packet tail at the grid edge exceeds 1e-12");
    }
  }
}
}  // namespace

WaveFunction gaussian_packet(const PacketSpec& spec, const GridPtr& grid) {
  if (!(spec.width > 0)) throw Error(ErrorKind::InvalidParameter, "packet width must be positive");
  check_fits(spec, *grid);
  const double amp0 = std::pow(2.0 * constants::pi * spec.width * spec.width, -0.25);
  std::vector<cplx> a(grid->size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = grid->position(i) - spec.center;
    a[i] = amp0 * std::exp(-d * d / (4.0 * spec.width * spec.width)) * std::polar(1.0, spec.wavenumber * d);
  }
  WaveFunction psi(grid, std::move(a));
  psi.normalize();
  return psi;
}

double gaussian_momentum_density(const PacketSpec& spec, double k) {
  const double dk = 1.0 / (2.0 * spec.width);
  const double u = k - spec.wavenumber;
  return std::exp(-u * u / (2.0 * dk * dk)) / std::sqrt(2.0 * constants::pi * dk * dk);
}

double superposition_overlap(double width, double k0) { return std::exp(-2.0 * k0 * k0 * width * width); }

WaveFunction symmetric_superposition(double width, double k0, const GridPtr& grid, const Cavity& cavity) {
  if (!(width > 0)) throw Error(ErrorKind::InvalidParameter, "packet width must be positive");
  if (3.0 * width >= cavity.barrier_center) {
    throw Error(ErrorKind::BarrierOverlap, "3-sigma envelope of the intra-cavity packet reaches a barrier");
  }
  check_fits(PacketSpec{width, 0.0, 0.0}, *grid);
  const double amp0 = std::pow(2.0 * constants::pi * width * width, -0.25);
  const double norm = 1.0 / std::sqrt(2.0 * (1.0 + superposition_overlap(width, k0)));
  std::vector<cplx> a(grid->size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = grid->position(i);
    a[i] = 2.0 * norm * amp0 * std::exp(-x * x / (4.0 * width * width)) * std::cos(k0 * x);
  }
  return WaveFunction(grid, std::move(a));
}

PacketMoments moments(const WaveFunction& psi_in) {
  const WaveFunction psi = psi_in.representation() == Representation::Position ? psi_in : to_position(psi_in);
  const Grid& g = *psi.grid();
  double n = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::norm(psi[i]);
    const double x = g.position(i);
    n += d;
    m1 += d * x;
    m2 += d * x * x;
  }
  PacketMoments out;
  out.mean_position = m1 / n;
  out.position_width = std::sqrt(std::max(0.0, m2 / n - out.mean_position * out.mean_position));

  const WaveFunction phi = to_momentum(psi);
  n = m1 = m2 = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = std::norm(phi[j]);
    const double k = g.wavenumber(j);
    n += d;
    m1 += d * k;
    m2 += d * k * k;
  }
  out.mean_wavenumber = m1 / n;
  out.wavenumber_width = std::sqrt(std::max(0.0, m2 / n - out.mean_wavenumber * out.mean_wavenumber));
  return out;
}

}  // namespace mwfpi
