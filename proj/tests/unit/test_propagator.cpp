#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "mwfpi/propagator.hpp"
#include "mwfpi/scattering.hpp"
#include "mwfpi/sensing.hpp"

using namespace mwfpi;

namespace {

PotentialField linear_field(const GridPtr& g, double slope) {
  PotentialDescriptor d;
  d.slope = slope;
  PotentialField f{g, std::vector<double>(g->size()), d};
  for (std::size_t i = 0; i < g->size(); ++i) f.samples[i] = slope * g->position(i);
  return f;
}

double distance(const WaveFunction& a, const WaveFunction& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * a.grid()->dx());
}

Evolution run_for(const WaveFunction& psi0, const PotentialField& v, double beta, double dt, double t_end,
                  double gamma = 0.0) {
  EvolveSettings s;
  s.dt = dt;
  s.t_end = t_end;
  s.nonlinearity = gamma;
  s.record_moments = true;
  s.sample_stride = 10;
  return evolve(psi0, v, beta, s);
}

}  // namespace

TEST_CASE("free spreading is exact") {
  const auto g = build_grid(-512, 512, 4096);
  const double beta = 1.02, w = 4.0, k0 = 0.5;
  const WaveFunction psi0 = gaussian_packet({w, -100.0, k0}, g);
  const auto ev = run_for(psi0, linear_field(g, 0.0), beta, 0.25, 100.0);
  const PacketMoments m = moments(ev.psi);
  const double t = ev.record.times.back();
  CHECK(t == doctest::Approx(100.0));
  CHECK(m.mean_position == doctest::Approx(-100.0 + 2 * beta * k0 * t).epsilon(1e-10));
  const double dk = 1.0 / (2 * w);
  CHECK(m.position_width == doctest::Approx(std::sqrt(w * w + std::pow(2 * beta * dk * t, 2))).epsilon(1e-9));
  CHECK(m.wavenumber_width == doctest::Approx(dk).epsilon(1e-9));
}

TEST_CASE("Ehrenfest motion in a linear potential") {
  const auto g = build_grid(-1024, 1024, 8192);
  const double beta = 1.02, G = 0.004, k0 = 0.6;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, k0}, g);
  const auto ev = run_for(psi0, linear_field(g, G), beta, 0.1, 300.0);
  const auto& r = ev.record;
  const double dk0 = r.moments.front().wavenumber_width;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double t = r.times[i];
    CHECK(r.moments[i].mean_position == doctest::Approx(-49.5 + 2 * beta * k0 * t - beta * G * t * t).epsilon(1e-8));
    CHECK(r.moments[i].mean_wavenumber == doctest::Approx(k0 - G * t).epsilon(1e-8));
    // a uniform force shifts every momentum component equally
    CHECK(std::abs(r.moments[i].wavenumber_width / dk0 - 1.0) < 1e-6);
  }
  const PacketMoments fin = moments(ev.psi);
  CHECK(fin.mean_wavenumber == doctest::Approx(k0 - G * 300.0).epsilon(1e-8));
}

TEST_CASE("norm drift over 1e4 steps") {
  const auto g = build_grid(-1024, 1024, 4096);
  Cavity c;
  c.tilt = 0.003;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, 0.8}, g);
  const PotentialField v = cavity_potential(c, g);
  SplitStepPropagator p(psi0, v, 1.02, 0.05);
  p.advance(10000);
  CHECK(std::abs(p.wave_function().norm() - 1.0) < 1e-10);
}

TEST_CASE("second-order convergence in dt") {
  const auto g = build_grid(-256, 256, 2048);
  const Cavity c;
  const WaveFunction psi0 = gaussian_packet({4.0, -30.0, 0.9}, g);
  const PotentialField v = cavity_potential(c, g);
  const double T = 20.0;
  const auto a = run_for(psi0, v, 1.02, 0.2, T).psi;
  const auto b = run_for(psi0, v, 1.02, 0.1, T).psi;
  const auto d = run_for(psi0, v, 1.02, 0.05, T).psi;
  const double ratio = distance(a, b) / distance(b, d);
  MESSAGE("convergence factor " << ratio);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("energy conservation without tilt") {
  const auto g = build_grid(-512, 512, 4096);
  const Cavity c;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, 0.8}, g);
  const PotentialField v = cavity_potential(c, g);
  const double e0 = energy(psi0, v, 1.02);
  const auto ev = run_for(psi0, v, 1.02, 0.05, 60.0);
  CHECK(energy(ev.psi, v, 1.02) == doctest::Approx(e0).epsilon(1e-4));
}

TEST_CASE("GPE path with zero coupling matches the linear path") {
  const auto g = build_grid(-512, 512, 4096);
  const Cavity c;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, 0.8}, g);
  const PotentialField v = cavity_potential(c, g);
  const auto lin = run_for(psi0, v, 1.02, 0.1, 40.0);
  // smallest positive coupling selects the nonlinear branch; gamma |psi|^2 underflows to 0
  const auto gpe = run_for(psi0, v, 1.02, 0.1, 40.0, std::numeric_limits<double>::denorm_min());
  double worst = 0;
  for (std::size_t i = 0; i < lin.psi.size(); ++i) worst = std::max(worst, std::abs(lin.psi[i] - gpe.psi[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("repulsive GPE conserves norm and energy") {
  const auto g = build_grid(-512, 512, 4096);
  const Cavity c;
  const double gamma = 2.0;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, 0.8}, g);
  const PotentialField v = cavity_potential(c, g);
  const double e0 = energy(psi0, v, 1.02, gamma);
  const auto ev = run_for(psi0, v, 1.02, 0.05, 40.0, gamma);
  CHECK(ev.psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(energy(ev.psi, v, 1.02, gamma) == doctest::Approx(e0).epsilon(1e-3));
  // self-energy turns into kinetic energy: the momentum width grows
  const auto lin = run_for(psi0, linear_field(g, 0.0), 1.02, 0.05, 40.0, gamma);
  CHECK(moments(lin.psi).wavenumber_width > 1.0 / 24.0);
}

TEST_CASE("time-step rule") {
  const auto g = build_grid(-512, 512, 4096);
  const Cavity c;
  const WaveFunction psi0 = gaussian_packet({12.0, -49.5, 0.8}, g);
  const PotentialField v = cavity_potential(c, g);
  const double dt = choose_time_step(psi0, v, 1.02);
  CHECK(dt > 0);
  CHECK(dt <= 0.1 + 1e-12);  // potential variation of one barrier height
  CHECK(choose_time_step(psi0, v, 1.02, 4.0) == doctest::Approx(dt / 4.0));
  // fast packet: kinetic phase rule binds
  const WaveFunction fast = gaussian_packet({12.0, -49.5, 4.0}, g);
  const double dtf = choose_time_step(fast, v, 1.02);
  CHECK(1.02 * 4.0 * 4.0 * dtf < 0.5);
}

TEST_CASE("stop rule: over-barrier transmission empties the cavity") {
  const auto g = build_grid(-4096, 4096, 16384);
  const Cavity c;
  const PacketSpec spec{12.0, -49.5, std::sqrt(2.0 / 1.02)};
  const WaveFunction psi0 = gaussian_packet(spec, g);
  const PotentialField v = cavity_potential(c, g);
  EvolveSettings s;
  s.dt = choose_time_step(psi0, v, 1.02);
  const auto ev = evolve_until_scattered(psi0, v, 1.02, s, classical_stop_times(c, spec, 1e4));
  CHECK(ev.record.stop_reason == StopReason::CavityEmpty);
  CHECK(ev.record.converged);
  const auto obs = project(ev.psi, c);
  const double oracle = averaged_transmission(c, psi0, default_cavity_steps(c) * 8);
  CHECK(obs.T_R == doctest::Approx(oracle).epsilon(0.01));
  CHECK(obs.T_R > 0.9);
}

TEST_CASE("stop rule: below the barrier away from resonances") {
  const auto g = build_grid(-4096, 4096, 16384);
  const Cavity c;
  const PacketSpec spec{12.0, -49.5, std::sqrt(0.48 / 1.02)};
  const WaveFunction psi0 = gaussian_packet(spec, g);
  const PotentialField v = cavity_potential(c, g);
  EvolveSettings s;
  s.dt = choose_time_step(psi0, v, 1.02);
  const auto ev = evolve_until_scattered(psi0, v, 1.02, s, classical_stop_times(c, spec, 1e4));
  CHECK(ev.record.stop_reason == StopReason::CavityEmpty);
  const double T = project(ev.psi, c).T_R;
  const double oracle = averaged_transmission(c, psi0, default_cavity_steps(c) * 8);
  CHECK(T < 0.05);
  CHECK(T == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("stop rule: bounce guard for a strong uphill tilt") {
  const auto g = build_grid(-2048, 2048, 8192);
  Cavity c;
  c.tilt = 0.05;
  const double e = 0.9;  // kinetic energy at the center
  const PacketSpec spec{12.0, -49.5, std::sqrt((e + c.tilt * 49.5) / 1.02)};
  const ScatterStop stop = classical_stop_times(c, spec, 1e4);
  REQUIRE(std::isfinite(stop.bounce_guard));
  // apex of the transmitted packet: x_+ reached at t1, then k / G more
  const WaveFunction psi0 = gaussian_packet(spec, g);
  const PotentialField v = cavity_potential(c, g);
  EvolveSettings s;
  s.dt = choose_time_step(psi0, v, 1.02);
  const auto ev = evolve_until_scattered(psi0, v, 1.02, s, stop);
  CHECK(ev.record.stop_reason == StopReason::BounceGuard);
  CHECK(ev.record.times.back() == doctest::Approx(stop.bounce_guard).epsilon(0.01));
}

TEST_CASE("classical stop times") {
  Cavity c;
  const PacketSpec spec{12.0, -49.5, 0.8};
  const ScatterStop s0 = classical_stop_times(c, spec, 500.0);
  CHECK(s0.earliest == doctest::Approx(49.5 / (2 * c.stiffness * 0.8)));
  CHECK(std::isinf(s0.bounce_guard));
  c.tilt = 0.005;
  const ScatterStop s1 = classical_stop_times(c, spec, 500.0);
  // x(t) = x0 + 2 beta k0 t - beta G t^2 reaches 0
  const double b = c.stiffness, G = c.tilt, k = 0.8;
  const double t0 = (b * k - std::sqrt(b * b * k * k - b * G * 49.5)) / (b * G);
  CHECK(s1.earliest == doctest::Approx(t0));
  c.tilt = -0.005;
  const ScatterStop s2 = classical_stop_times(c, spec, 500.0);
  CHECK(s2.bounce_guard > s2.earliest);
}

TEST_CASE("boundary reach is reported") {
  const auto g = build_grid(-128, 128, 1024);
  const WaveFunction psi0 = gaussian_packet({4.0, 0.0, 1.5}, g);
  EvolveSettings s;
  s.dt = 0.05;
  s.t_end = 200.0;
  CHECK_THROWS_AS(evolve(psi0, linear_field(g, 0.0), 1.0, s), Error);
  try {
    evolve(psi0, linear_field(g, 0.0), 1.0, s);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BoundaryReach);
  }
}

TEST_CASE("snapshot stream round trip and carpet") {
  const auto g = build_grid(-128, 128, 256);
  const WaveFunction psi0 = gaussian_packet({4.0, 0.0, 0.3}, g);
  EvolveSettings s;
  s.dt = 0.1;
  s.t_end = 5.0;
  s.sample_stride = 5;
  s.snapshot_stride = 2;
  const auto ev = evolve(psi0, linear_field(g, 0.0), 1.0, s);
  REQUIRE(ev.record.snapshots.size() >= 2);
  const auto path = (std::filesystem::temp_directory_path() / "mwfpi_snap_test.bin").string();
  write_snapshot_stream(path, ev.record);
  const auto back = read_snapshot_stream(path, g->size());
  REQUIRE(back.size() == ev.record.snapshots.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].first == ev.record.snapshot_times[k]);
    CHECK(back[k].second == ev.record.snapshots[k]);
  }
  std::filesystem::remove(path);

  const Carpet cp = carpet(psi0, linear_field(g, 0.0), 1.0, s, 10, -20.0, 20.0, 2);
  CHECK(cp.times.size() == 6);
  CHECK(cp.density.front().size() == cp.positions.size());
  CHECK(cp.positions.front() >= -20.0);
}
