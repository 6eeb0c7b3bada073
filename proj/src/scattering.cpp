#include "mwfpi/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace mwfpi {

namespace {

using Real2 = std::array<double, 4>;  // row-major 2x2 acting on (psi, psi')

Real2 mul(const Real2& a, const Real2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

// Propagator of psi'' = -(e - v)/stiffness psi across a slab of width w.
Real2 slab(double energy, double v, double w, double stiffness) {
  const double q2 = (energy - v) / stiffness;  // q^2, negative under the step
  const double z = q2 * w * w;
  double c, s_over_q, q_s;
  if (std::abs(z) < 1e-4) {
    c = 1.0 - z / 2.0 + z * z / 24.0;
    s_over_q = w * (1.0 - z / 6.0 + z * z / 120.0);
    q_s = q2 * w * (1.0 - z / 6.0 + z * z / 120.0);
  } else if (q2 > 0) {
    const double q = std::sqrt(q2);
    c = std::cos(q * w);
    s_over_q = std::sin(q * w) / q;
    q_s = q * std::sin(q * w);
  } else {
    const double kappa = std::sqrt(-q2);
    c = std::cosh(kappa * w);
    s_over_q = std::sinh(kappa * w) / kappa;
    q_s = -kappa * std::sinh(kappa * w);
  }
  return {c, s_over_q, -q_s, c};
}

// W(x) maps (A, B) to (psi, psi') at x.
TransferMatrix to_plane_waves(const Real2& p, double energy, double a, double b, double stiffness) {
  if (!(energy > 0)) throw Error(ErrorKind::InvalidParameter, "transfer matrices need E > 0");
  const double k = std::sqrt(energy / stiffness);
  const cplx i(0, 1);
  const cplx ea = std::exp(i * k * a), eb = std::exp(i * k * b);
  // W(a)
  const cplx w11 = ea, w12 = 1.0 / ea, w21 = i * k * ea, w22 = -i * k / ea;
  // W(b)^{-1} = 1/(-2ik) [[-ik e^{-ikb}, -e^{-ikb}], [-ik e^{ikb}, e^{ikb}]]
  const cplx inv_det = 1.0 / (-2.0 * i * k);
  const cplx v11 = inv_det * (-i * k / eb), v12 = inv_det * (-1.0 / eb);
  const cplx v21 = inv_det * (-i * k * eb), v22 = inv_det * eb;
  const cplx pw11 = p[0] * w11 + p[1] * w21, pw12 = p[0] * w12 + p[1] * w22;
  const cplx pw21 = p[2] * w11 + p[3] * w21, pw22 = p[2] * w12 + p[3] * w22;
  TransferMatrix t;
  t.m = {v11 * pw11 + v12 * pw21, v11 * pw12 + v12 * pw22, v21 * pw11 + v22 * pw21, v21 * pw12 + v22 * pw22};
  t.energy = energy;
  t.window_lo = a;
  t.window_hi = b;
  return t;
}

}  // namespace

TransferMatrix operator*(const TransferMatrix& later, const TransferMatrix& earlier) {
  const auto& a = later.m;
  const auto& b = earlier.m;
  TransferMatrix t;
  t.m = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  t.energy = later.energy;
  t.n_steps = later.n_steps + earlier.n_steps;
  t.window_lo = earlier.window_lo;
  t.window_hi = later.window_hi;
  return t;
}

TransferMatrix step_matrix(double energy, double v_step, double x_a, double x_b, double stiffness) {
  if (!(x_b > x_a)) throw Error(ErrorKind::InvalidParameter, "step width must be positive");
  auto t = to_plane_waves(slab(energy, v_step, x_b - x_a, stiffness), energy, x_a, x_b, stiffness);
  t.n_steps = 1;
  return t;
}

TransferMatrix window_matrix(double energy, const std::function<double(double)>& v, double a, double b,
                             std::size_t n_steps, double stiffness) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidParameter, "n_steps must be >= 1");
  if (!(b > a)) throw Error(ErrorKind::InvalidParameter, "empty window");
  const double w = (b - a) / static_cast<double>(n_steps);
  Real2 p{1, 0, 0, 1};
  for (std::size_t s = 0; s < n_steps; ++s) {
    const double mid = a + (static_cast<double>(s) + 0.5) * w;
    p = mul(slab(energy, v(mid), w, stiffness), p);
  }
  auto t = to_plane_waves(p, energy, a, b, stiffness);
  t.n_steps = n_steps;
  return t;
}

std::pair<double, double> cavity_window(const Cavity& cavity) {
  return {cavity.left_barrier() - 6.0, cavity.right_barrier() + 6.0};
}

std::size_t default_cavity_steps(const Cavity& cavity) {
  const auto [a, b] = cavity_window(cavity);
  return static_cast<std::size_t>(std::ceil((b - a) / 0.27));
}

TransferMatrix cavity_matrix(double energy, const Cavity& cavity, std::size_t n_steps) {
  if (cavity.tilt != 0.0) {
    throw Error(ErrorKind::GravityNonzero, "plane-wave transfer matrices require zero tilt");
  }
  const auto d = cavity_descriptor(cavity);
  const auto [a, b] = cavity_window(cavity);
  return window_matrix(energy, [&d](double x) { return d(x); }, a, b, n_steps, cavity.stiffness);
}

std::vector<double> transmission_values(const Cavity& cavity, const std::vector<double>& energies,
                                        std::size_t n_steps, Execution exec) {
  std::vector<double> out(energies.size());
  detail::run_indexed(energies.size(), 0, exec, [&](std::size_t i) {
    out[i] = cavity_matrix(energies[i], cavity, n_steps).transmission();
  });
  return out;
}

TransmissionSpectrum transmission_spectrum(const Cavity& cavity, const std::vector<double>& energies, double tol,
                                           Execution exec) {
  TransmissionSpectrum s;
  s.energies = energies;
  std::size_t n = default_cavity_steps(cavity);
  auto prev = transmission_values(cavity, energies, n, exec);
  for (int d = 0; d < 20; ++d) {
    n *= 2;
    auto next = transmission_values(cavity, energies, n, exec);
    double change = 0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - prev[i]));
    prev = std::move(next);
    if (change < tol) {
      s.transmission = std::move(prev);
      s.n_steps = n;
      s.converged = true;
      return s;
    }
  }
  throw Error(ErrorKind::NotConverged, "transmission spectrum did not converge after 20 doublings");
}

namespace {
WaveFunction momentum_of(const WaveFunction& psi0) {
  return psi0.representation() == Representation::Momentum ? psi0 : to_momentum(psi0);
}

void check_right_moving(const WaveFunction& phi) {
  const Grid& g = *phi.grid();
  double neg = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.wavenumber(j) <= 0) neg += std::norm(phi[j]);
  }
  if (neg * g.dk() >= 1e-6) {
    throw Error(ErrorKind::NotApplicable, "state carries negative-momentum weight >= 1e-6");
  }
}
}  // namespace

double averaged_transmission(const std::function<double(double)>& tau_sq_of_k, const WaveFunction& psi0) {
  const WaveFunction phi = momentum_of(psi0);
  check_right_moving(phi);
  const Grid& g = *phi.grid();
  double s = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = g.wavenumber(j);
    if (k > 0) s += tau_sq_of_k(k) * std::norm(phi[j]);
  }
  return s * g.dk();
}

double averaged_transmission(const Cavity& cavity, const WaveFunction& psi0, std::size_t n_steps, Execution exec) {
  if (cavity.tilt != 0.0) throw Error(ErrorKind::NotApplicable, "momentum averaging holds only at zero tilt");
  const WaveFunction phi = momentum_of(psi0);
  check_right_moving(phi);
  const Grid& g = *phi.grid();
  const auto dens = phi.density();
  const double peak = *std::max_element(dens.begin(), dens.end());
  std::vector<std::size_t> idx;
  std::vector<double> energies;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double k = g.wavenumber(j);
    if (k > 0 && dens[j] > 1e-16 * peak) {
      idx.push_back(j);
      energies.push_back(cavity.stiffness * k * k);
    }
  }
  const auto tau = transmission_values(cavity, energies, n_steps, exec);
  double s = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) s += tau[i] * dens[idx[i]];
  return s * g.dk();
}

}  // namespace mwfpi
