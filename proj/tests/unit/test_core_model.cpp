#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mwfpi/core_model.hpp"
#include "mwfpi/fft.hpp"

using namespace mwfpi;

TEST_CASE("scales for the default parameters") {
  const ModelParams p = ModelParams::defaults();
  const Scales s = make_scales(p);
  CHECK(s.length_unit == doctest::Approx(1e-6));
  CHECK(s.energy_unit == doctest::Approx(3.78e-32));
  CHECK(s.time_unit == doctest::Approx(constants::hbar / 3.78e-32));
  // hbar^2 / (2 m sigma^2 V_b)
  const double beta = constants::hbar * constants::hbar / (2.0 * p.mass_kg * 1e-12 * 3.78e-32);
  CHECK(s.stiffness == doctest::Approx(beta).epsilon(1e-12));
  CHECK(s.stiffness == doctest::Approx(1.02).epsilon(0.01));
  CHECK(s.to_tilt(1e-3) == doctest::Approx(p.mass_kg * 1e-3 * 1e-6 / 3.78e-32));
  CHECK(s.to_si_gravity(s.to_tilt(2.5e-3)) == doctest::Approx(2.5e-3));
  CHECK(s.to_si_momentum(s.to_wavenumber(3e-29)) == doctest::Approx(3e-29));
}

TEST_CASE("reduced cavity and packet") {
  ModelParams p = ModelParams::defaults();
  p.gravity_m_s2 = 1e-3;
  const Scales s = make_scales(p);
  const Cavity c = reduce_cavity(p, s);
  CHECK(c.barrier_center == doctest::Approx(10.5));
  CHECK(c.tilt == doctest::Approx(s.to_tilt(1e-3)));
  const PacketSpec k = reduce_packet(p, s);
  CHECK(k.width == doctest::Approx(12.0));
  CHECK(k.center == doctest::Approx(-49.5));
  CHECK(p.default_packet_center() == doctest::Approx(-49.5e-6));
}

TEST_CASE("parameter validation") {
  ModelParams p = ModelParams::defaults();
  p.barrier_height_J = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = ModelParams::defaults();
  p.cavity_length_m = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_NOTHROW(ModelParams::defaults().validate());
}

TEST_CASE("grid layout") {
  const auto g = std::make_shared<const Grid>(-8.0, 8.0, 16);
  CHECK(g->dx() == doctest::Approx(1.0));
  CHECK(g->dk() == doctest::Approx(2.0 * constants::pi / 16.0));
  CHECK(g->position(0) == doctest::Approx(-8.0));
  CHECK(g->wavenumber(0) == doctest::Approx(-8 * g->dk()));
  CHECK(g->wavenumber(8) == doctest::Approx(0.0));
  for (std::size_t j = 0; j < 16; ++j) CHECK(g->native_wavenumber(g->fft_index(j)) == doctest::Approx(g->wavenumber(j)));
  CHECK(g->index_at_or_below(0.5) == 8);
  CHECK(g->index_at_or_below(-100) == 0);
  CHECK_THROWS_AS(build_grid(-1, 1, 100), Error);
  CHECK_THROWS_AS(build_grid(-1, 1, 128), Error);
  CHECK_THROWS_AS(Grid(-1, 1, 96), Error);
  CHECK_THROWS_AS(build_grid(1, -1, 64), Error);
}

TEST_CASE("FFT matches a direct DFT") {
  const std::size_t n = 32;
  std::vector<cplx> x(n), ref(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = cplx(std::sin(0.3 * i), std::cos(1.7 * i * i));
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) ref[m] += x[i] * std::polar(1.0, -2.0 * constants::pi * double(m * i) / n);
  }
  auto plan = fft_plan(n);
  auto y = x;
  plan->forward(y);
  for (std::size_t m = 0; m < n; ++m) CHECK(std::abs(y[m] - ref[m]) < 1e-12);
  plan->backward(y);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] / double(n) - x[i]) < 1e-13);
}

TEST_CASE("momentum transform of a Gaussian and Parseval") {
  const auto g = build_grid(-64, 64, 1024);
  const double w = 2.0, k0 = 1.3, x0 = 3.0;
  std::vector<cplx> a(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->position(i) - x0;
    a[i] = std::pow(2 * constants::pi * w * w, -0.25) * std::exp(cplx(-x * x / (4 * w * w), k0 * x));
  }
  const WaveFunction psi(g, a);
  const WaveFunction phi = to_momentum(psi);
  CHECK(phi.norm() == doctest::Approx(psi.norm()).epsilon(1e-13));
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // |phi(k)|^2 = sqrt(2/pi) w exp(-2 w^2 (k - k0)^2)
  for (std::size_t j = 0; j < g->size(); j += 17) {
    const double k = g->wavenumber(j);
    const double ref = std::sqrt(2.0 / constants::pi) * w * std::exp(-2 * w * w * (k - k0) * (k - k0));
    CHECK(std::abs(std::norm(phi[j]) - ref) < 1e-12);
  }
  const WaveFunction back = to_position(phi);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(back[i] - psi[i]) < 1e-13);
}

TEST_CASE("population over an interval") {
  const auto g = std::make_shared<const Grid>(-4.0, 4.0, 8);
  std::vector<cplx> a(8, cplx(0.5, 0));
  const WaveFunction psi(g, a);
  CHECK(population(psi, -4, 4) == doctest::Approx(8 * 0.25));
  CHECK(population(psi, 0, 4) == doctest::Approx(4 * 0.25));
}
