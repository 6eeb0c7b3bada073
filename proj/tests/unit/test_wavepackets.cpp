#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mwfpi/wavepackets.hpp"

using namespace mwfpi;

TEST_CASE("Gaussian packet moments") {
  const auto g = build_grid(-512, 512, 4096);
  const PacketSpec spec{12.0, -49.5, 0.87};
  const WaveFunction psi = gaussian_packet(spec, g);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const PacketMoments m = moments(psi);
  CHECK(m.mean_position == doctest::Approx(-49.5).epsilon(1e-10));
  CHECK(m.position_width == doctest::Approx(12.0).epsilon(1e-10));
  CHECK(m.mean_wavenumber == doctest::Approx(0.87).epsilon(1e-10));
  // minimum uncertainty: dk = 1 / (2 dx)
  CHECK(m.wavenumber_width == doctest::Approx(1.0 / 24.0).epsilon(1e-8));
}

TEST_CASE("closed-form momentum density") {
  const auto g = build_grid(-256, 256, 2048);
  const PacketSpec spec{6.0, 10.0, -0.4};
  const WaveFunction phi = to_momentum(gaussian_packet(spec, g));
  for (std::size_t j = 0; j < g->size(); j += 7) {
    CHECK(std::abs(std::norm(phi[j]) - gaussian_momentum_density(spec, g->wavenumber(j))) < 1e-12);
  }
}

TEST_CASE("packets that do not fit are rejected") {
  const auto g = build_grid(-100, 100, 1024);
  CHECK_THROWS_AS(gaussian_packet({20.0, 0.0, 0.0}, g), Error);
  CHECK_THROWS_AS(gaussian_packet({5.0, 75.0, 0.0}, g), Error);
  CHECK_THROWS_AS(gaussian_packet({0.0, 0.0, 0.0}, g), Error);
  CHECK_NOTHROW(gaussian_packet({5.0, 0.0, 0.0}, g));
}

TEST_CASE("symmetric superposition") {
  const auto g = build_grid(-256, 256, 4096);
  const Cavity cav;
  for (double k0 : {0.0, 0.1, 0.3, 0.9}) {
    const WaveFunction psi = symmetric_superposition(3.0, k0, g, cav);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const PacketMoments m = moments(psi);
    CHECK(std::abs(m.mean_position) < 1e-12);
    CHECK(std::abs(m.mean_wavenumber) < 1e-12);
    // parity
    for (std::size_t i = 1; i < g->size() / 2; i += 31) CHECK(std::abs(psi[i] - psi[g->size() - i]) < 1e-15);
  }
  // numerical cross term <g e^{ikx} | g e^{-ikx}> = exp(-2 k0^2 dx^2)
  const double w = 3.0, k0 = 0.2;
  double overlap = 0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->position(i);
    overlap += std::exp(-x * x / (2 * w * w)) / std::sqrt(2 * constants::pi * w * w) * std::cos(2 * k0 * x);
  }
  CHECK(overlap * g->dx() == doctest::Approx(superposition_overlap(w, k0)).epsilon(1e-12));
  CHECK_THROWS_AS(symmetric_superposition(3.5, 0.5, g, cav), Error);
}
