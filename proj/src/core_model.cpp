#include "mwfpi/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mwfpi/fft.hpp"

namespace mwfpi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::NoBoundStates: return "no-bound-states";
    case ErrorKind::PacketTooWide: return "packet-too-wide-for-grid";
    case ErrorKind::BarrierOverlap: return "overlap-with-barrier";
    case ErrorKind::BoundaryReach: return "boundary-reach";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::GravityNonzero: return "gravity-nonzero";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::ThetaOutOfRange: return "theta-out-of-range";
    case ErrorKind::BoxTooSmall: return "box-too-small";
    case ErrorKind::NoPlateau: return "no-plateau";
    case ErrorKind::TrackLost: return "track-lost";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

ModelParams ModelParams::defaults() {
  ModelParams p;
  p.packet_center_m = p.default_packet_center();
  p.bragg_wavevector_1_m = p.default_bragg_wavevector();
  return p;
}

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidParameter, what);
  };
  require(std::isfinite(mass_kg) && mass_kg > 0, "mass must be positive");
  require(std::isfinite(barrier_height_J) && barrier_height_J > 0, "barrier height must be positive");
  require(std::isfinite(barrier_width_m) && barrier_width_m > 0, "barrier width must be positive");
  require(std::isfinite(cavity_length_m) && cavity_length_m >= 0, "cavity length must be non-negative");
  require(std::isfinite(packet_width_m) && packet_width_m > 0, "packet width must be positive");
  require(std::isfinite(gravity_m_s2), "gravity must be finite");
  require(std::isfinite(interaction_J_m), "interaction must be finite");
  require(std::isfinite(packet_center_m), "packet center must be finite");
  require(std::isfinite(packet_momentum_kg_m_s), "packet momentum must be finite");
}

Scales make_scales(const ModelParams& params) {
  if (!(params.mass_kg > 0) || !(params.barrier_height_J > 0) || !(params.barrier_width_m > 0)) {
    throw Error(ErrorKind::InvalidParameter, "mass, barrier height and barrier width must be positive");
  }
  Scales s;
  s.length_unit = params.barrier_width_m;
  s.energy_unit = params.barrier_height_J;
  s.time_unit = constants::hbar / s.energy_unit;
  s.momentum_unit = std::sqrt(2.0 * params.mass_kg * s.energy_unit);
  s.stiffness = constants::hbar * constants::hbar /
                (2.0 * params.mass_kg * s.length_unit * s.length_unit * s.energy_unit);
  s.mass = params.mass_kg;
  return s;
}

Cavity reduce_cavity(const ModelParams& params, const Scales& scales) {
  Cavity c;
  c.stiffness = scales.stiffness;
  c.tilt = scales.to_tilt(params.gravity_m_s2);
  c.barrier_center = scales.to_reduced_length(params.barrier_position());
  c.nonlinearity = scales.to_reduced_interaction(params.interaction_J_m);
  return c;
}

PacketSpec reduce_packet(const ModelParams& params, const Scales& scales) {
  PacketSpec p;
  p.width = scales.to_reduced_length(params.packet_width_m);
  p.center = scales.to_reduced_length(params.packet_center_m);
  p.wavenumber = scales.to_wavenumber(params.packet_momentum_kg_m_s);
  return p;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::InvalidParameter, "grid requires x_max > x_min");
  }
  if (!is_power_of_two(n_points)) {
    throw Error(ErrorKind::InvalidParameter, "grid size must be a power of two");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_);
  dk_ = 2.0 * constants::pi / (x_max - x_min);
  positions_.resize(n_);
  wavenumbers_.resize(n_);
  const double half = static_cast<double>(n_ / 2);
  for (std::size_t i = 0; i < n_; ++i) {
    positions_[i] = x_min_ + dx_ * static_cast<double>(i);
    wavenumbers_[i] = dk_ * (static_cast<double>(i) - half);
  }
}

std::size_t Grid::index_at_or_below(double x) const {
  if (x <= x_min_) return 0;
  auto i = static_cast<std::size_t>(std::floor((x - x_min_) / dx_));
  return std::min(i, n_ - 1);
}

GridPtr build_grid(double x_min, double x_max, std::size_t n_points) {
  if (n_points < 256) {
    throw Error(ErrorKind::InvalidParameter, "grid size must be at least 2^8");
  }
  return std::make_shared<const Grid>(x_min, x_max, n_points);
}

WaveFunction::WaveFunction(GridPtr grid, std::vector<cplx> amplitudes, Representation rep)
    : grid_(std::move(grid)), amp_(std::move(amplitudes)), rep_(rep) {
  if (!grid_ || amp_.size() != grid_->size()) {
    throw Error(ErrorKind::GridMismatch, "amplitude count does not match grid");
  }
}

double WaveFunction::norm() const {
  double s = 0;
  for (const auto& a : amp_) s += std::norm(a);
  return s * (rep_ == Representation::Position ? grid_->dx() : grid_->dk());
}

double WaveFunction::normalize() {
  const double n = norm();
  if (!(n > 0)) throw Error(ErrorKind::InvalidParameter, "cannot normalize a zero wave function");
  const double f = 1.0 / std::sqrt(n);
  for (auto& a : amp_) a *= f;
  return n;
}

std::vector<double> WaveFunction::density() const {
  std::vector<double> d(amp_.size());
  std::transform(amp_.begin(), amp_.end(), d.begin(), [](const cplx& a) { return std::norm(a); });
  return d;
}

WaveFunction to_momentum(const WaveFunction& psi) {
  if (psi.representation() == Representation::Momentum) return psi;
  const Grid& g = *psi.grid();
  const std::size_t n = g.size();
  std::vector<cplx> work(psi.amplitudes().begin(), psi.amplitudes().end());
  fft_plan(n)->forward(work);
  std::vector<cplx> out(n);
  const double pref = g.dx() / std::sqrt(2.0 * constants::pi);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.wavenumber(j);
    out[j] = pref * std::polar(1.0, -k * g.x_min()) * work[g.fft_index(j)];
  }
  return WaveFunction(psi.grid(), std::move(out), Representation::Momentum);
}

WaveFunction to_position(const WaveFunction& psi) {
  if (psi.representation() == Representation::Position) return psi;
  const Grid& g = *psi.grid();
  const std::size_t n = g.size();
  std::vector<cplx> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.wavenumber(j);
    work[g.fft_index(j)] = std::polar(1.0, k * g.x_min()) * psi[j];
  }
  fft_plan(n)->backward(work);
  const double pref = g.dk() / std::sqrt(2.0 * constants::pi);
  for (auto& a : work) a *= pref;
  return WaveFunction(psi.grid(), std::move(work), Representation::Position);
}

double population(const WaveFunction& psi, double a, double b) {
  if (psi.representation() != Representation::Position) {
    throw Error(ErrorKind::InvalidParameter, "population requires position representation");
  }
  const Grid& g = *psi.grid();
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.position(i);
    if (x >= a && x <= b) s += std::norm(psi[i]);
  }
  return s * g.dx();
}

}  // namespace mwfpi
