#include "mwfpi/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace mwfpi {

namespace {

struct Eig {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

// Dense non-hermitian eigensolve (LAPACK zgeev). BLAS threading is pinned to
// one thread so that results do not depend on the worker count.
Eig eig(Eigen::MatrixXcd a, bool with_vectors) {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
  const auto n = static_cast<lapack_int>(a.rows());
  Eig out;
  out.values.resize(n);
  if (with_vectors) out.vectors.resize(n, n);
  std::complex<double> dummy;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n, a.data(), n, out.values.data(), &dummy, 1,
                    with_vectors ? out.vectors.data() : &dummy, with_vectors ? n : 1);
  if (info != 0) throw Error(ErrorKind::NotConverged, "zgeev failed with info " + std::to_string(info));
  return out;
}

}  // namespace

double Resonance::angle() const { return std::atan2(width, 2.0 * energy); }

std::vector<double> sine_mesh(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n + 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * static_cast<double>(i + 1);
  return x;
}

Eigen::MatrixXcd complex_scaled_hamiltonian(const PotentialDescriptor& v, double stiffness, double theta,
                                            std::size_t basis_size, double a, double b) {
  const auto n = static_cast<Eigen::Index>(basis_size);
  const double np1 = static_cast<double>(basis_size + 1);
  const double len = b - a;
  const double pref = stiffness * constants::pi * constants::pi / (2.0 * len * len);
  const cplx rot_t = std::polar(1.0, -2.0 * theta);
  const cplx rot_x = std::polar(1.0, theta);
  const auto x = sine_mesh(a, b, basis_size);
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ii = static_cast<double>(i + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double jj = static_cast<double>(j + 1);
      double t;
      if (i == j) {
        const double s = std::sin(constants::pi * ii / np1);
        t = (2.0 * np1 * np1 + 1.0) / 3.0 - 1.0 / (s * s);
      } else {
        const double sm = std::sin(constants::pi * (ii - jj) / (2.0 * np1));
        const double sp = std::sin(constants::pi * (ii + jj) / (2.0 * np1));
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        t = sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
      }
      h(i, j) = pref * t * rot_t;
    }
    h(i, i) += v(cplx(x[static_cast<std::size_t>(i)]) * rot_x);
  }
  return h;
}

Eigen::MatrixXcd complex_scaled_hamiltonian(const Cavity& cavity, double theta, std::size_t basis_size,
                                            double box_half_width) {
  if (!(theta >= 0 && theta < constants::pi / 4)) {
    throw Error(ErrorKind::ThetaOutOfRange, "theta must lie in [0, pi/4)");
  }
  if (basis_size < 64) throw Error(ErrorKind::InvalidParameter, "basis_size must be >= 64");
  const double margin = box_half_width - cavity.barrier_center;
  if (margin < 10.0 || std::exp(-0.5 * margin * margin) > 1e-10) {
    throw Error(ErrorKind::BoxTooSmall, "box must extend at least 10 barrier widths past the barriers");
  }
  return complex_scaled_hamiltonian(cavity_descriptor(cavity), cavity.stiffness, theta, basis_size,
                                    -box_half_width, box_half_width);
}

namespace {

Eigen::VectorXcd eigenvalues_only(const Cavity& cavity, double theta, const ScalingSettings& s,
                                  std::size_t basis_size) {
  return eig(complex_scaled_hamiltonian(cavity, theta, basis_size, s.box_half_width), false).values;
}

double nearest_distance(const Eigen::VectorXcd& ev, cplx z) {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) d = std::min(d, std::abs(ev(i) - z));
  return d;
}

std::pair<double, double> localization_window(const Cavity& c) {
  if (c.tilt > 0) return {c.left_barrier() - 3.0, c.right_barrier()};
  if (c.tilt < 0) return {c.left_barrier(), c.right_barrier() + 3.0};
  return {c.left_barrier(), c.right_barrier()};
}

std::vector<Resonance> solve(const Cavity& cavity, const ScalingSettings& s, std::size_t basis_size) {
  const Eig es = eig(complex_scaled_hamiltonian(cavity, s.theta, basis_size, s.box_half_width), true);
  const auto& ev = es.values;
  const auto& vec = es.vectors;
  const auto x = sine_mesh(-s.box_half_width, s.box_half_width, basis_size);
  const auto [lo, hi] = localization_window(cavity);

  std::vector<Resonance> cand;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    Resonance r;
    r.energy = ev(k).real();
    r.width = -2.0 * ev(k).imag();
    r.theta = s.theta;
    if (!(r.width > 0) || r.energy <= s.e_min || r.energy >= s.e_max) continue;
    // With a tilt the continuum covers every energy and only the plateau test applies.
    if (cavity.tilt == 0.0 && r.angle() >= 2.0 * s.theta) continue;
    double inside = 0, total = 0;
    for (Eigen::Index i = 0; i < vec.rows(); ++i) {
      const double w = std::norm(vec(i, k));
      total += w;
      if (x[static_cast<std::size_t>(i)] >= lo && x[static_cast<std::size_t>(i)] <= hi) inside += w;
    }
    r.localization = inside / total;
    if (r.localization < s.min_localization) continue;
    cand.push_back(r);
  }
  if (cand.empty()) return cand;

  std::vector<Resonance> kept;
  const auto up = eigenvalues_only(cavity, s.theta * (1.0 + s.plateau_step), s, basis_size);
  const auto down = eigenvalues_only(cavity, s.theta * (1.0 - s.plateau_step), s, basis_size);
  for (auto r : cand) {
    const cplx z(r.energy, -0.5 * r.width);
    const double tol = std::max(1e-3 * r.width, 1e-6);
    if (nearest_distance(up, z) < tol && nearest_distance(down, z) < tol) {
      r.plateau_width = 2.0 * s.plateau_step * s.theta;
      kept.push_back(r);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Resonance& a, const Resonance& b) { return a.energy < b.energy; });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].index = static_cast<int>(i);
  return kept;
}

}  // namespace

ResonanceSet find_resonances(const Cavity& cavity, const ScalingSettings& settings) {
  ResonanceSet out;
  out.resonances = solve(cavity, settings, settings.basis_size);
  if (out.resonances.empty()) throw Error(ErrorKind::NoPlateau, "no eigenvalue passed the theta-plateau test");
  if (settings.check_basis) {
    const auto doubled = solve(cavity, settings, 2 * settings.basis_size);
    for (const auto& r : out.resonances) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& d : doubled) best = std::min(best, std::abs(d.energy - r.energy));
      out.basis_shift = std::max(out.basis_shift, best);
    }
    out.basis_converged = out.basis_shift <= 1e-3;
  }
  return out;
}

double triangular_level(const Cavity& cavity, int n) {
  if (cavity.tilt == 0.0) throw Error(ErrorKind::NoBoundStates, "triangular well needs a nonzero tilt");
  const auto z = airy_zero_magnitudes(n + 1);
  return -std::abs(cavity.tilt) * cavity.barrier_center +
         z[static_cast<std::size_t>(n)] * std::cbrt(cavity.stiffness * cavity.tilt * cavity.tilt);
}

std::vector<ResonanceTrack> track_vs_gravity(const Cavity& cavity, const std::vector<double>& tilts,
                                             const ScalingSettings& settings, std::size_t n_tracks,
                                             Execution exec) {
  if (tilts.empty()) throw Error(ErrorKind::InvalidParameter, "empty tilt grid");
  for (std::size_t i = 1; i < tilts.size(); ++i) {
    if (!(tilts[i] > tilts[i - 1])) throw Error(ErrorKind::InvalidParameter, "tilt grid must increase");
  }
  const auto zero = std::find(tilts.begin(), tilts.end(), 0.0);
  if (zero == tilts.end()) throw Error(ErrorKind::InvalidParameter, "tilt grid must contain zero");
  const auto i0 = static_cast<std::size_t>(zero - tilts.begin());

  ScalingSettings s = settings;
  s.e_min = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<Resonance>> sets(tilts.size());
  detail::run_indexed(tilts.size(), 0, exec, [&](std::size_t i) {
    Cavity c = cavity;
    c.tilt = tilts[i];
    ScalingSettings si = s;
    if (tilts[i] == 0.0) si.e_min = settings.e_min;
    sets[i] = solve(c, si, s.basis_size);
  });

  const auto& base = sets[i0];
  if (base.size() < n_tracks) throw Error(ErrorKind::NoPlateau, "fewer resonances at zero tilt than requested");
  const std::size_t nt = tilts.size();
  std::vector<std::vector<cplx>> path(n_tracks, std::vector<cplx>(nt));
  std::vector<std::vector<bool>> cross(n_tracks, std::vector<bool>(nt, false));
  for (std::size_t t = 0; t < n_tracks; ++t) path[t][i0] = cplx(base[t].energy, -0.5 * base[t].width);

  auto follow = [&](long step) {
    for (long i = static_cast<long>(i0) + step; i >= 0 && i < static_cast<long>(nt); i += step) {
      const auto ui = static_cast<std::size_t>(i);
      const auto& cands = sets[ui];
      std::vector<cplx> pred(n_tracks);
      for (std::size_t t = 0; t < n_tracks; ++t) {
        const auto prev = static_cast<std::size_t>(i - step);
        const long pprev = i - 2 * step;
        if ((pprev - static_cast<long>(i0)) * step >= 0) {
          const double h1 = tilts[ui] - tilts[prev];
          const double h0 = tilts[prev] - tilts[static_cast<std::size_t>(pprev)];
          pred[t] = path[t][prev] + (path[t][prev] - path[t][static_cast<std::size_t>(pprev)]) * (h1 / h0);
        } else {
          pred[t] = path[t][prev];
        }
      }
      std::vector<int> owner(cands.size(), -1);
      for (std::size_t t = 0; t < n_tracks; ++t) {
        std::vector<std::size_t> order(cands.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        auto dist = [&](std::size_t k) { return std::abs(cplx(cands[k].energy, -0.5 * cands[k].width) - pred[t]); };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
        if (order.empty()) throw Error(ErrorKind::TrackLost, "no resonance candidates at tilt " + std::to_string(tilts[ui]));
        std::size_t pick = order[0];
        if (owner[pick] >= 0) {
          cross[t][ui] = true;
          cross[static_cast<std::size_t>(owner[pick])][ui] = true;
          if (order.size() < 2) throw Error(ErrorKind::TrackLost, "resonance tracks merged");
          pick = order[1];
        }
        // Local spacing: distance from the chosen eigenvalue to its nearest other candidate.
        const cplx zp(cands[pick].energy, -0.5 * cands[pick].width);
        double spacing = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cands.size(); ++k) {
          if (k != pick) spacing = std::min(spacing, std::abs(cplx(cands[k].energy, -0.5 * cands[k].width) - zp));
        }
        if (dist(pick) > 0.5 * spacing) {
          throw Error(ErrorKind::TrackLost, "track " + std::to_string(t) + " lost at tilt " + std::to_string(tilts[ui]) +
                                                " (distance " + std::to_string(dist(pick)) + ", half spacing " +
                                                std::to_string(0.5 * spacing) + ")");
        }
        owner[pick] = static_cast<int>(t);
        path[t][ui] = zp;
      }
    }
  };
  follow(+1);
  follow(-1);

  std::vector<ResonanceTrack> out(n_tracks);
  const std::size_t iend = std::abs(tilts.back()) >= std::abs(tilts.front()) ? nt - 1 : 0;
  for (std::size_t t = 0; t < n_tracks; ++t) {
    auto& tr = out[t];
    tr.id = static_cast<int>(t);
    tr.tilts = tilts;
    tr.crossing = cross[t];
    for (std::size_t i = 0; i < nt; ++i) {
      tr.energies.push_back(path[t][i].real());
      tr.widths.push_back(-2.0 * path[t][i].imag());
    }
    if (tilts[iend] != 0.0) {
      Cavity c = cavity;
      c.tilt = tilts[iend];
      tr.triangular_level = triangular_level(c, static_cast<int>(t));
      tr.triangular_distance = std::abs(tr.energies[iend] - tr.triangular_level);
    }
  }
  return out;
}

SpectrumModel lorentzian_model(const std::vector<Resonance>& resonances) {
  if (resonances.empty()) throw Error(ErrorKind::InvalidParameter, "empty resonance list");
  SpectrumModel m;
  for (const auto& r : resonances) m.components.push_back({r.energy, r.width});
  return m;
}

double lorentzian(const SpectrumModel::Component& c, double e) {
  const double h = 0.5 * c.width;
  return h * h / ((e - c.energy) * (e - c.energy) + h * h);
}

double eval(const SpectrumModel& model, double e) {
  double v = 0;
  for (const auto& c : model.components) v = std::max(v, lorentzian(c, e));
  return v;
}

}  // namespace mwfpi
