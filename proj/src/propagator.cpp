#include "mwfpi/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "mwfpi/fft.hpp"

namespace mwfpi {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::TimeLimit: return "time-limit";
    case StopReason::CavityEmpty: return "cavity-empty";
    case StopReason::BounceGuard: return "bounce-guard";
  }
  return "?";
}

SplitStepPropagator::SplitStepPropagator(const WaveFunction& psi0, const PotentialField& v, double stiffness,
                                         double dt, double nonlinearity)
    : grid_(psi0.grid()),
      plan_(fft_plan(psi0.size())),
      stiffness_(stiffness),
      slope_(v.descriptor.slope),
      dt_(dt),
      gamma_(nonlinearity) {
  if (!(*v.grid == *grid_)) throw Error(ErrorKind::GridMismatch, "potential and state live on different grids");
  if (!(dt > 0)) throw Error(ErrorKind::InvalidParameter, "dt must be positive");
  const WaveFunction p = psi0.representation() == Representation::Position ? psi0 : to_position(psi0);
  psi_.assign(p.amplitudes().begin(), p.amplitudes().end());
  const std::size_t n = grid_->size();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (slope_ == 0.0) {
    kin_half_.resize(n);
    kin_full_.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double k = grid_->native_wavenumber(m);
      const double w = stiffness * k * k;
      kin_half_[m] = inv_n * std::polar(1.0, -0.5 * w * dt);
      kin_full_[m] = inv_n * std::polar(1.0, -w * dt);
    }
  }
  pot_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot_[i] = v.samples[i] - slope_ * (grid_->position(i) - v.descriptor.slope_origin);
  }
  pot_phase_.resize(n);
  for (std::size_t i = 0; i < n; ++i) pot_phase_[i] = std::polar(1.0, -pot_[i] * dt);
}

void SplitStepPropagator::apply_potential() {
  const std::size_t n = psi_.size();
  if (gamma_ == 0.0) {
    for (std::size_t i = 0; i < n; ++i) psi_[i] *= pot_phase_[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      psi_[i] *= std::polar(1.0, -(pot_[i] + gamma_ * std::norm(psi_[i])) * dt_);
    }
  }
}

void SplitStepPropagator::apply_kinetic(double t0, double h) {
  const std::size_t n = psi_.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (slope_ == 0.0) {
    const auto& f = (h == dt_) ? kin_full_ : kin_half_;
    for (std::size_t m = 0; m < n; ++m) psi_[m] *= f[m];
    return;
  }
  const double g = slope_;
  if (h == dt_) {
    // Consecutive full steps differ by exp(2i stiffness G dt^2 k) times a
    // scalar; refresh from scratch every 256 steps.
    if (kin_age_ < 256 && std::abs(t0 - kin_t_ - dt_) < 1e-6 * dt_) {
      const cplx c = std::polar(1.0, -2.0 * stiffness_ * g * g * dt_ * dt_ * (kin_t_ + dt_));
      for (std::size_t m = 0; m < n; ++m) {
        kin_tilt_[m] *= kin_ratio_[m] * c;
        psi_[m] *= kin_tilt_[m];
      }
      kin_t_ = t0;
      ++kin_age_;
      return;
    }
    if (kin_ratio_.empty()) {
      kin_ratio_.resize(n);
      kin_tilt_.resize(n);
      for (std::size_t m = 0; m < n; ++m) {
        kin_ratio_[m] = std::polar(1.0, 2.0 * stiffness_ * g * dt_ * dt_ * grid_->native_wavenumber(m));
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      const double u = grid_->native_wavenumber(m) - g * t0;
      const double phase = stiffness_ * (u * u * h - u * g * h * h + g * g * h * h * h / 3.0);
      kin_tilt_[m] = inv_n * std::polar(1.0, -phase);
      psi_[m] *= kin_tilt_[m];
    }
    kin_t_ = t0;
    kin_age_ = 0;
    return;
  }
  // \int_0^h (u - G s)^2 ds with u = k - G t0
  for (std::size_t m = 0; m < n; ++m) {
    const double u = grid_->native_wavenumber(m) - g * t0;
    const double phase = stiffness_ * (u * u * h - u * g * h * h + g * g * h * h * h / 3.0);
    psi_[m] *= inv_n * std::polar(1.0, -phase);
  }
}

void SplitStepPropagator::advance(std::size_t n_steps) {
  if (n_steps == 0) return;
  const std::size_t n = psi_.size();
  const double half = 0.5 * dt_;
  // 1/N of the inverse transform is folded into the kinetic factors.
  plan_->forward(psi_);
  apply_kinetic(time_, half);
  plan_->backward(psi_);
  for (std::size_t s = 0; s < n_steps; ++s) {
    apply_potential();
    plan_->forward(psi_);
    const double t_mid = time_ + (static_cast<double>(s) + 0.5) * dt_;
    apply_kinetic(t_mid, s + 1 < n_steps ? dt_ : half);
    if (s + 1 == n_steps) {
      const double pref = grid_->dx() / std::sqrt(2.0 * constants::pi) * static_cast<double>(n);
      const double a = std::norm(psi_[n / 2] * pref);
      const double b = std::norm(psi_[n / 2 - 1] * pref);
      const double c = std::norm(psi_[n / 2 + 1] * pref);
      k_edge_ = std::max({a, b, c});
    }
    plan_->backward(psi_);
  }
  time_ += dt_ * static_cast<double>(n_steps);
}

WaveFunction SplitStepPropagator::wave_function() const {
  if (slope_ == 0.0) return WaveFunction(grid_, psi_);
  std::vector<cplx> a(psi_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = psi_[i] * std::polar(1.0, -slope_ * time_ * grid_->position(i));
  return WaveFunction(grid_, std::move(a));
}

PacketMoments SplitStepPropagator::physical_moments() const {
  auto m = moments(WaveFunction(grid_, psi_));
  m.mean_wavenumber -= slope_ * time_;
  return m;
}

double SplitStepPropagator::edge_density() const {
  return std::max(std::norm(psi_.front()), std::norm(psi_.back()));
}

double energy(const WaveFunction& psi_in, const PotentialField& v, double stiffness, double nonlinearity) {
  const WaveFunction psi = psi_in.representation() == Representation::Position ? psi_in : to_position(psi_in);
  const Grid& g = *psi.grid();
  double pot = 0, nl = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::norm(psi[i]);
    pot += v.samples[i] * d;
    nl += d * d;
  }
  const WaveFunction phi = to_momentum(psi);
  double kin = 0;
  for (std::size_t j = 0; j < g.size(); ++j) kin += g.wavenumber(j) * g.wavenumber(j) * std::norm(phi[j]);
  return stiffness * kin * g.dk() + (pot + 0.5 * nonlinearity * nl) * g.dx();
}

std::pair<double, double> cavity_bounds(const PotentialDescriptor& d) {
  if (d.barriers.empty()) return {0.0, 0.0};
  double lo = d.barriers.front().center, hi = lo;
  for (const auto& b : d.barriers) {
    lo = std::min(lo, b.center);
    hi = std::max(hi, b.center);
  }
  return {lo, hi};
}

double choose_time_step(const WaveFunction& psi_in, const PotentialField& v, double stiffness, double safety) {
  const WaveFunction psi = psi_in.representation() == Representation::Position ? psi_in : to_position(psi_in);
  const Grid& g = *psi.grid();
  const auto dens = psi.density();
  const double dmax = *std::max_element(dens.begin(), dens.end());
  double lo = g.x_max(), hi = g.x_min();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dens[i] > 1e-10 * dmax) {
      lo = std::min(lo, g.position(i));
      hi = std::max(hi, g.position(i));
    }
  }
  for (const auto& b : v.descriptor.barriers) {
    lo = std::min(lo, b.center - 3.0 * b.width);
    hi = std::max(hi, b.center + 3.0 * b.width);
  }
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.position(i);
    if (x < lo || x > hi) continue;
    // The linear part is carried exactly by the gauge and does not limit dt.
    const double vi = v.samples[i] - v.descriptor.slope * (x - v.descriptor.slope_origin);
    vmin = std::min(vmin, vi);
    vmax = std::max(vmax, vi);
  }
  const WaveFunction phi = to_momentum(psi);
  const auto kd = phi.density();
  const double kmax_d = *std::max_element(kd.begin(), kd.end());
  double ks = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (kd[j] > 1e-10 * kmax_d) ks = std::max(ks, std::abs(g.wavenumber(j)));
  }
  // Local wavenumber over a potential drop dv: sqrt(k^2 + dv / stiffness).
  ks = std::sqrt(ks * ks + std::max(0.0, vmax - vmin) / stiffness);
  const double dt_kin = ks > 0 ? 0.5 / (stiffness * ks * ks) : std::numeric_limits<double>::infinity();
  const double dt_pot = vmax > vmin ? 0.1 / (vmax - vmin) : std::numeric_limits<double>::infinity();
  double dt = std::min(dt_kin, dt_pot) / safety;
  if (!std::isfinite(dt)) dt = 0.1 / safety;
  return dt;
}

namespace {

struct Sampler {
  const EvolveSettings& settings;
  std::pair<double, double> cavity;
  EvolutionRecord record;
  std::size_t n_samples = 0;

  double sample(const SplitStepPropagator& prop, const GridPtr& grid) {
    const auto& a = prop.amplitudes();
    if (prop.edge_density() > settings.edge_threshold) {
      throw Error(ErrorKind::BoundaryReach, "wave function reached the grid edge at t = " + std::to_string(prop.time()));
    }
    if (prop.momentum_edge_density() > settings.edge_threshold) {
      throw Error(ErrorKind::BoundaryReach,
                  "wave function reached the momentum-grid edge at t = " + std::to_string(prop.time()));
    }
    double pc = 0;
    const auto i0 = grid->index_at_or_below(cavity.first);
    const auto i1 = grid->index_at_or_below(cavity.second);
    if (cavity.second > cavity.first) {
      for (std::size_t i = i0; i <= i1; ++i) {
        if (grid->position(i) >= cavity.first) pc += std::norm(a[i]);
      }
    }
    pc = std::clamp(pc * grid->dx(), 0.0, 1.0);
    record.times.push_back(prop.time());
    record.cavity_population.push_back(pc);
    if (settings.record_moments) record.moments.push_back(prop.physical_moments());
    if (settings.snapshot_stride > 0 && n_samples % settings.snapshot_stride == 0) {
      std::vector<double> d(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::norm(a[i]);
      record.snapshot_times.push_back(prop.time());
      record.snapshots.push_back(std::move(d));
    }
    ++n_samples;
    return pc;
  }
};

double zone_population(const std::vector<cplx>& a, const Grid& g, const PotentialDescriptor& d, double half) {
  double s = 0;
  for (const auto& b : d.barriers) {
    const auto i0 = g.index_at_or_below(b.center - half);
    const auto i1 = g.index_at_or_below(b.center + half);
    for (std::size_t i = i0; i <= i1; ++i) s += std::norm(a[i]);
  }
  return s * g.dx();
}

std::size_t stride_of(const EvolveSettings& s) { return std::max<std::size_t>(1, s.sample_stride); }

}  // namespace

Evolution evolve(const WaveFunction& psi0, const PotentialField& v, double stiffness, const EvolveSettings& settings) {
  if (!(settings.t_end > 0)) throw Error(ErrorKind::InvalidParameter, "t_end must be positive");
  SplitStepPropagator prop(psi0, v, stiffness, settings.dt, settings.nonlinearity);
  Sampler sampler{settings, cavity_bounds(v.descriptor), {}};
  sampler.record.dt = settings.dt;
  const auto total = static_cast<std::size_t>(std::llround(settings.t_end / settings.dt));
  const std::size_t stride = stride_of(settings);
  sampler.sample(prop, psi0.grid());
  std::size_t done = 0;
  while (done < total) {
    const std::size_t n = std::min(stride, total - done);
    prop.advance(n);
    done += n;
    sampler.sample(prop, psi0.grid());
  }
  sampler.record.steps = done;
  sampler.record.stop_reason = StopReason::TimeLimit;
  return {prop.wave_function(), std::move(sampler.record)};
}

ScatterStop classical_stop_times(const Cavity& cav, const PacketSpec& spec, double t_cap) {
  const double beta = cav.stiffness;
  const double G = cav.tilt;
  const double k0 = spec.wavenumber;
  const double x0 = spec.center;
  // x(t) = x0 + 2 beta k0 t - beta G t^2
  auto reach = [&](double x) {
    const double dist = x - x0;
    if (G == 0.0) return k0 > 0 ? dist / (2.0 * beta * k0) : std::numeric_limits<double>::infinity();
    const double disc = beta * beta * k0 * k0 - beta * G * dist;
    if (disc < 0) return std::numeric_limits<double>::infinity();
    return (beta * k0 - std::sqrt(disc)) / (beta * G);
  };
  ScatterStop s;
  s.t_cap = t_cap;
  s.earliest = std::min(reach(0.0), t_cap);
  const double e0 = beta * k0 * k0;
  if (G > 0) {
    const double ep = e0 - G * (cav.right_barrier() - x0);
    if (ep > 0) s.bounce_guard = reach(cav.right_barrier()) + std::sqrt(ep / beta) / G;
  } else if (G < 0) {
    const double em = e0 - G * (cav.left_barrier() - x0);
    const double km = std::sqrt(em / beta);
    const double t_back = reach(cav.left_barrier()) + 2.0 * km / (-G);
    const double dk = 1.0 / (2.0 * spec.width);
    const double width = std::sqrt(spec.width * spec.width + std::pow(2.0 * beta * dk * t_back, 2));
    s.bounce_guard = t_back - 3.0 * width / (2.0 * beta * km);
  }
  return s;
}

Evolution evolve_until_scattered(const WaveFunction& psi0, const PotentialField& v, double stiffness,
                                 const EvolveSettings& settings, const ScatterStop& stop) {
  SplitStepPropagator prop(psi0, v, stiffness, settings.dt, settings.nonlinearity);
  Sampler sampler{settings, cavity_bounds(v.descriptor), {}};
  sampler.record.dt = settings.dt;
  const std::size_t stride = stride_of(settings);
  const double limit = std::min(stop.t_cap, stop.bounce_guard);
  double pc = sampler.sample(prop, psi0.grid());
  std::size_t done = 0;
  StopReason reason = StopReason::TimeLimit;
  for (;;) {
    const double remaining = limit - prop.time();
    if (remaining < 0.5 * settings.dt) {
      reason = stop.bounce_guard <= stop.t_cap ? StopReason::BounceGuard : StopReason::TimeLimit;
      break;
    }
    const auto n = std::min<std::size_t>(stride, std::max<std::size_t>(1, static_cast<std::size_t>(remaining / settings.dt)));
    prop.advance(n);
    done += n;
    pc = sampler.sample(prop, psi0.grid());
    if (prop.time() >= stop.earliest && pc < stop.cavity_threshold &&
        zone_population(prop.amplitudes(), *psi0.grid(), v.descriptor, stop.zone_half_width) < stop.zone_threshold) {
      reason = StopReason::CavityEmpty;
      break;
    }
  }
  sampler.record.steps = done;
  sampler.record.stop_reason = reason;
  sampler.record.converged = !(reason == StopReason::TimeLimit && pc >= stop.cavity_threshold);
  return {prop.wave_function(), std::move(sampler.record)};
}

Carpet carpet(const WaveFunction& psi0, const PotentialField& v, double stiffness, const EvolveSettings& settings,
              std::size_t time_stride, double x_lo, double x_hi, std::size_t x_stride) {
  if (!(settings.t_end > 0)) throw Error(ErrorKind::InvalidParameter, "t_end must be positive");
  time_stride = std::max<std::size_t>(1, time_stride);
  x_stride = std::max<std::size_t>(1, x_stride);
  const Grid& g = *psi0.grid();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); i += x_stride) {
    if (g.position(i) >= x_lo && g.position(i) <= x_hi) idx.push_back(i);
  }
  Carpet c;
  for (auto i : idx) c.positions.push_back(g.position(i));
  SplitStepPropagator prop(psi0, v, stiffness, settings.dt, settings.nonlinearity);
  auto take = [&]() {
    if (prop.edge_density() > settings.edge_threshold) {
      throw Error(ErrorKind::BoundaryReach, "wave function reached the grid edge");
    }
    std::vector<double> row;
    row.reserve(idx.size());
    for (auto i : idx) row.push_back(std::norm(prop.amplitudes()[i]));
    c.times.push_back(prop.time());
    c.density.push_back(std::move(row));
  };
  take();
  const auto total = static_cast<std::size_t>(std::llround(settings.t_end / settings.dt));
  std::size_t done = 0;
  while (done < total) {
    const std::size_t n = std::min(time_stride, total - done);
    prop.advance(n);
    done += n;
    take();
  }
  return c;
}

void write_snapshot_stream(const std::string& path, const EvolutionRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  for (std::size_t s = 0; s < record.snapshots.size(); ++s) {
    const double t = record.snapshot_times[s];
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    out.write(reinterpret_cast<const char*>(record.snapshots[s].data()),
              static_cast<std::streamsize>(record.snapshots[s].size() * sizeof(double)));
  }
}

std::vector<std::pair<double, std::vector<double>>> read_snapshot_stream(const std::string& path, std::size_t n_points) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::vector<std::pair<double, std::vector<double>>> out;
  for (;;) {
    double t;
    if (!in.read(reinterpret_cast<char*>(&t), sizeof t)) break;
    std::vector<double> d(n_points);
    if (!in.read(reinterpret_cast<char*>(d.data()), static_cast<std::streamsize>(n_points * sizeof(double)))) {
      throw Error(ErrorKind::Io, "truncated snapshot record in " + path);
    }
    out.emplace_back(t, std::move(d));
  }
  return out;
}

}  // namespace mwfpi
