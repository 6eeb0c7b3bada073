#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mwfpi/potentials.hpp"

using namespace mwfpi;

TEST_CASE("cavity samples") {
  Cavity c;
  c.tilt = 0.01;
  const auto g = build_grid(-64, 64, 1024);
  const PotentialField v = cavity_potential(c, g);
  for (std::size_t i = 0; i < g->size(); i += 13) {
    const double x = g->position(i);
    const double ref = 0.01 * x + std::exp(-0.5 * (x + 10.5) * (x + 10.5)) + std::exp(-0.5 * (x - 10.5) * (x - 10.5));
    CHECK(v.samples[i] == doctest::Approx(ref).epsilon(1e-14));
    CHECK(v.descriptor(x) == doctest::Approx(ref).epsilon(1e-14));
  }
  // complex continuation agrees on the real axis
  CHECK(std::abs(v.descriptor(cplx(3.7, 0.0)) - v.descriptor(3.7)) < 1e-14);
}

TEST_CASE("untilted cavity is even") {
  const Cavity c;
  const PotentialDescriptor d = cavity_descriptor(c);
  for (double x : {0.3, 5.0, 10.5, 12.25, 30.0}) CHECK(d(x) == doctest::Approx(d(-x)));
  CHECK(d(10.5) == doctest::Approx(1.0 + std::exp(-0.5 * 21.0 * 21.0)));
}

TEST_CASE("SI potential") {
  ModelParams p = ModelParams::defaults();
  p.gravity_m_s2 = 2e-3;
  const double z = 10.5e-6;
  const double ref = p.mass_kg * 2e-3 * z + p.barrier_height_J * (1.0 + std::exp(-0.5 * 21.0 * 21.0));
  CHECK(cavity_potential_si(p, z) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("Airy zeros against tabulated values") {
  // Abramowitz & Stegun Table 10.13
  const double table[] = {2.33810741, 4.08794944, 5.52055983, 6.78670809, 7.94413359,
                          9.02265085, 10.04017434, 11.00852430, 11.93601556, 12.82877675};
  const auto z = airy_zero_magnitudes(10);
  REQUIRE(z.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(z[i] == doctest::Approx(table[i]).epsilon(1e-8));
  CHECK_THROWS_AS(airy_zero_magnitudes(0), Error);
}

TEST_CASE("Airy function values") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.355028053887817).epsilon(1e-13));
  CHECK(airy_ai(1.0) == doctest::Approx(0.135292416312881).epsilon(1e-12));
  CHECK(airy_ai(-2.0) == doctest::Approx(0.227407428201528).epsilon(1e-12));
  CHECK(std::abs(airy_ai(-2.33810741)) < 1e-8);
}

TEST_CASE("triangular well levels against a finite-difference solve") {
  // -beta psi'' + G x psi on x > 0 with psi(0) = 0
  const double beta = 1.02, G = 0.05;
  const int n = 3000;
  const double L = 120.0, h = L / (n + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, i) = 2 * beta / (h * h) + G * (i + 1) * h;
    if (i + 1 < n) H(i, i + 1) = H(i + 1, i) = -beta / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const auto e = triangular_eigenenergies_reduced(G, beta, 4);
  for (int j = 0; j < 4; ++j) CHECK(e[j] == doctest::Approx(es.eigenvalues()(j)).epsilon(1e-4));
  // sign of the tilt only mirrors the well
  CHECK(triangular_eigenenergies_reduced(-G, beta, 1)[0] == doctest::Approx(e[0]));
  CHECK_THROWS_AS(triangular_eigenenergies_reduced(0.0, beta, 2), Error);
}

TEST_CASE("SI triangular levels") {
  const double m = constants::rb87_mass, g = 9.81;
  const auto e = triangular_eigenenergies(g, m, 2);
  const double scale = std::cbrt(constants::hbar * constants::hbar * m * g * g / 2.0);
  CHECK(e[0] == doctest::Approx(2.33810741 * scale).epsilon(1e-8));
  CHECK(e[1] == doctest::Approx(4.08794944 * scale).epsilon(1e-8));
}

TEST_CASE("triangular potential with a capped wall") {
  const auto g = build_grid(-32, 32, 256);
  const PotentialField v = triangular_potential(-5.0, 0.1, g, 100.0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->position(i);
    if (x < -5.0) CHECK(v.samples[i] == doctest::Approx(100.0));
    else CHECK(v.samples[i] == doctest::Approx(0.1 * (x + 5.0)));
  }
  const PotentialField w = triangular_potential(5.0, -0.1, g, 100.0);
  CHECK(w.samples[g->index_at_or_below(0.0)] == doctest::Approx(0.5));
  CHECK(w.samples[g->index_at_or_below(6.0)] == doctest::Approx(100.0));
}
