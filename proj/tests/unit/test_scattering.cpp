#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mwfpi/scattering.hpp"
#include "mwfpi/wavepackets.hpp"

using namespace mwfpi;

namespace {
double rect_transmission(double e, double v, double a, double beta) {
  const double k2 = e / beta;
  if (e < v) {
    const double q2 = (v - e) / beta, q = std::sqrt(q2);
    return 1.0 / (1.0 + std::pow(k2 + q2, 2) * std::pow(std::sinh(q * a), 2) / (4 * k2 * q2));
  }
  if (e > v) {
    const double q2 = (e - v) / beta, q = std::sqrt(q2);
    return 1.0 / (1.0 + std::pow(k2 - q2, 2) * std::pow(std::sin(q * a), 2) / (4 * k2 * q2));
  }
  return 1.0 / (1.0 + k2 * a * a / 4.0);
}

double peak_near(const Cavity& c, double e, double half, std::size_t n) {
  // golden-section maximum of |tau|^2 on [e - half, e + half]
  double lo = e - half, hi = e + half;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double x) { return cavity_matrix(x, c, n).transmission(); };
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    if (f(a) > f(b)) hi = b;
    else lo = a;
  }
  return f(0.5 * (lo + hi));
}
}  // namespace

TEST_CASE("rectangular barrier against the closed form") {
  const double beta = 1.02, v = 1.0, a = 2.0;
  for (double e : {0.05, 0.3, 0.7, 0.99, 1.0, 1.01, 1.5, 3.0}) {
    const TransferMatrix t = step_matrix(e, v, 3.0, 3.0 + a, beta);
    CHECK(t.transmission() == doctest::Approx(rect_transmission(e, v, a, beta)).epsilon(1e-10));
  }
  // free slab: no scattering
  CHECK(step_matrix(0.4, 0.0, 5.0, beta).transmission() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(step_matrix(0.0, 1.0, 1.0, beta), Error);
  CHECK_THROWS_AS(step_matrix(0.5, 1.0, 1.0, 1.0, beta), Error);
}

TEST_CASE("unit determinant and flux conservation") {
  const Cavity c;
  const std::size_t n = default_cavity_steps(c);
  for (double e = 0.003; e < 3.0; e *= 1.37) {
    const TransferMatrix t = cavity_matrix(e, c, n);
    // cancellation in det grows like |M22|^2 = 1/T below the barriers
    CHECK(std::abs(t.det() - 1.0) < 1e-14 * std::max(1.0, 1.0 / t.transmission()));
    CHECK(std::abs(t.transmission() + t.reflection() - 1.0) < 1e-8);
  }
}

TEST_CASE("concatenation reproduces the single window") {
  const Cavity c;
  const auto d = cavity_descriptor(c);
  auto v = [&](double x) { return d(x); };
  const double a = -20.0, b = 20.0;
  const std::size_t n = 160;
  const double w = (b - a) / n;
  for (double e : {0.1, 0.6, 1.4}) {
    const TransferMatrix whole = window_matrix(e, v, a, b, n, c.stiffness);
    for (std::size_t n1 : {1u, 37u, 80u, 159u}) {
      const double mid = a + w * n1;
      const TransferMatrix left = window_matrix(e, v, a, mid, n1, c.stiffness);
      const TransferMatrix right = window_matrix(e, v, mid, b, n - n1, c.stiffness);
      const TransferMatrix prod = right * left;
      for (int i = 0; i < 4; ++i) CHECK(std::abs(prod.m[i] - whole.m[i]) < 1e-8 * std::max(1.0, std::abs(whole.m[i])));
    }
  }
}

TEST_CASE("staircase converges to the smooth barrier") {
  const Cavity c;
  const double e = 0.5;
  const std::size_t n = default_cavity_steps(c);
  const double t1 = cavity_matrix(e, c, n).transmission();
  const double t2 = cavity_matrix(e, c, 2 * n).transmission();
  const double t4 = cavity_matrix(e, c, 4 * n).transmission();
  // midpoint sampling is second order
  CHECK(std::abs(t1 - t2) / std::abs(t2 - t4) == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("unit transmission on resonance, deep minima between") {
  const ModelParams p;
  const Cavity c = reduce_cavity(p, make_scales(p));
  const std::size_t n = 8 * default_cavity_steps(c);
  const double er[] = {0.02564, 0.10174, 0.2258, 0.39354};
  const double gam[] = {2.7e-5, 2.84e-4, 1.37e-3, 5.15e-3};
  for (int j = 0; j < 4; ++j) CHECK(peak_near(c, er[j], 3 * gam[j], n) >= 0.99);
  double tmin = 1;
  for (double e = 0.03; e < 0.1; e += 0.001) tmin = std::min(tmin, cavity_matrix(e, c, n).transmission());
  CHECK(tmin < 1e-2);
}

TEST_CASE("spectrum convergence and errors") {
  const Cavity c;
  std::vector<double> e;
  for (int i = 0; i < 50; ++i) e.push_back(0.2 + 0.02 * i);
  const auto s = transmission_spectrum(c, e, 1e-6);
  CHECK(s.converged);
  CHECK(s.n_steps >= default_cavity_steps(c));
  const auto again = transmission_values(c, e, s.n_steps, Execution::Serial);
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(again[i] == s.transmission[i]);
  Cavity tilted;
  tilted.tilt = 0.01;
  CHECK_THROWS_AS(cavity_matrix(0.5, tilted, 100), Error);
}

TEST_CASE("momentum-averaged transmission") {
  const Cavity c;
  const std::size_t n = 4 * default_cavity_steps(c);
  const auto g = build_grid(-8192, 8192, 32768);
  // nearly monochromatic packet off resonance reproduces |tau(k0)|^2
  const double e = 0.7, k0 = std::sqrt(e / c.stiffness);
  const WaveFunction wide = gaussian_packet({600.0, 0.0, k0}, g);
  CHECK(averaged_transmission(c, wide, n) == doctest::Approx(cavity_matrix(e, c, n).transmission()).epsilon(1e-3));
  // the functional form integrates the density exactly
  CHECK(averaged_transmission([](double) { return 1.0; }, wide) == doctest::Approx(1.0).epsilon(1e-12));

  const WaveFunction slow = gaussian_packet({12.0, 0.0, 0.05}, g);
  CHECK_THROWS_AS(averaged_transmission(c, slow, n), Error);
  Cavity tilted;
  tilted.tilt = 0.002;
  CHECK_THROWS_AS(averaged_transmission(tilted, wide, n), Error);
}
