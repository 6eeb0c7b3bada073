#include "mwfpi/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "mwfpi/io.hpp"
#include "mwfpi/potentials.hpp"
#include "mwfpi/scattering.hpp"
#include "mwfpi/svg.hpp"
#include "mwfpi/wavepackets.hpp"

namespace fs = std::filesystem;

namespace mwfpi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string path_in(const ScenarioConfig& c, const std::string& name) { return (fs::path(c.output_dir) / name).string(); }

ScatterStop stop_thresholds(const ScenarioConfig& c, const Scales& s) {
  ScatterStop st;
  st.t_cap = s.to_reduced_time(c.solver.t_cap_s);
  st.cavity_threshold = c.solver.cavity_threshold;
  st.zone_threshold = c.solver.zone_threshold;
  st.zone_half_width = s.to_reduced_length(c.solver.zone_half_width_m);
  return st;
}

template <class Body>
TransmitOutcome on_grid_ladder(const std::vector<GridPtr>& grids, Body body) {
  for (std::size_t level = 0;; ++level) {
    try {
      TransmitOutcome out = body(grids[level]);
      out.extensions = static_cast<int>(level);
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BoundaryReach || level + 1 >= grids.size()) throw;
    }
  }
}

json outcome_diagnostics(const TransmitOutcome& o, const Scales& s) {
  const auto& r = o.record;
  return json{{"dt_s", s.to_si_time(r.dt)},
              {"t_stop_s", s.to_si_time(o.t_stop)},
              {"steps", r.steps},
              {"grid_points", o.grid->size()},
              {"grid_half_width_m", s.to_si_length(o.grid->x_max())},
              {"extensions", o.extensions},
              {"p_cav_final", r.cavity_population.empty() ? kNaN : r.cavity_population.back()},
              {"T_R", o.obs.T_R},
              {"T_L", o.obs.T_L}};
}

void write_potential(const ScenarioConfig& c, const Cavity& cav, const Scales& s) {
  CsvWriter csv(path_in(c, "potential.csv"), {"z_m", "V_J"});
  const double lo = cav.left_barrier() - 40.0, hi = cav.right_barrier() + 40.0;
  const int n = 2001;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double z = s.to_si_length(x);
    csv.row({z, cavity_potential_si(c.params, z)});
  }
}

PointRecord record_from(std::size_t index, json coords, const PointResult<TransmitOutcome>& r, const Scales& s) {
  PointRecord p;
  p.index = index;
  p.coords = std::move(coords);
  p.wall_seconds = r.wall_seconds;
  if (r.ok()) {
    p.stop_reason = to_string(r.value->record.stop_reason);
    p.converged = r.value->record.converged;
    p.diagnostics = outcome_diagnostics(*r.value, s);
  } else {
    p.stop_reason = "failed";
    p.converged = false;
    p.error = r.error;
  }
  return p;
}

// ---- scenarios ----

void run_spectrum(const ScenarioConfig& c, RunManifest& m, Execution exec) {
  const Scales s = make_scales(c.params);
  const Cavity cav = reduce_cavity(c.params, s);
  const double t0 = detail::wall_clock();
  const auto spec = transmission_spectrum(cav, c.energy_over_vb, c.solver.spectrum_tol, exec);
  {
    CsvWriter csv(path_in(c, "spectrum.csv"), {"E_over_Vb", "tau_sq"});
    for (std::size_t i = 0; i < spec.energies.size(); ++i) csv.row({spec.energies[i], spec.transmission[i]});
  }
  json side{{"n_steps", spec.n_steps}, {"converged", spec.converged}, {"tolerance", c.solver.spectrum_tol},
            {"window", {cavity_window(cav).first, cavity_window(cav).second}}};
  PointRecord p;
  p.coords = json{{"energies", spec.energies.size()}};
  p.stop_reason = "n/a";
  p.converged = spec.converged;
  p.diagnostics = side;

  svg::Series overlay{"Lorentzian sum", {}, {}, true};
  if (c.spectrum_overlay) {
    ScalingSettings ss = scaling_settings(c, s);
    ss.check_basis = false;
    ss.e_max = std::max(ss.e_max, c.energy_over_vb.back());
    const auto set = find_resonances(cav, ss);
    const SpectrumModel model = lorentzian_model(set.resonances);
    CsvWriter csv(path_in(c, "spectrum_overlay.csv"), {"E_over_Vb", "lorentzian"});
    for (double e : spec.energies) {
      const double y = eval(model, e);
      csv.row({e, y});
      overlay.x.push_back(e);
      overlay.y.push_back(y);
    }
    json peaks = json::array();
    for (const auto& r : set.resonances) peaks.push_back({{"Er_over_Vb", r.energy}, {"Gamma_over_Vb", r.width}});
    side["resonances"] = peaks;
  }
  write_json(path_in(c, "spectrum.json"), side);
  p.wall_seconds = detail::wall_clock() - t0;
  m.points.push_back(p);
  m.summary = side;
  if (c.svg) {
    std::vector<svg::Series> series{{"|tau|^2", spec.energies, spec.transmission, false}};
    if (c.spectrum_overlay) series.push_back(overlay);
    svg::line_plot(path_in(c, "spectrum.svg"), {"Transmission", "E / V_b", "|tau|^2", false}, series);
  }
  if (c.potential_csv) write_potential(c, cav, s);
}

double transmit_energy(const ScenarioConfig& c, const Scales& s, const Cavity& cav, const PacketSpec& p) {
  if (c.transmit_energy_over_vb >= 0) return c.transmit_energy_over_vb;
  const double k0 = s.to_wavenumber(c.params.packet_momentum_kg_m_s);
  return cav.stiffness * k0 * k0 - cav.tilt * std::abs(p.center);
}

void run_transmit(const ScenarioConfig& c, RunManifest& m) {
  TransmitSetup setup = make_transmit_setup(c);
  const Scales& s = setup.scales;
  setup.record_moments = true;
  if (c.snapshots) setup.snapshot_stride = 10;
  const double tilt = setup.cavity.tilt;
  const double e = transmit_energy(c, s, setup.cavity, setup.packet);
  std::vector<int> one{0};
  auto res = parallel_map(one, [&](int) { return run_transmission(setup, tilt, e); }, 1, Execution::Serial);
  m.points.push_back(record_from(0, json{{"g_m_s2", c.params.gravity_m_s2}, {"E_over_Vb", e}}, res[0], s));
  if (!res[0].ok()) return;
  const TransmitOutcome& o = *res[0].value;
  const auto& r = o.record;
  {
    CsvWriter csv(path_in(c, "transmit.csv"),
                  {"g_m_s2", "E_over_Vb", "T_R", "T_L", "var_T_R", "stop_reason", "converged", "t_stop_s"});
    csv.row({c.params.gravity_m_s2, e, o.obs.T_R, o.obs.T_L, o.obs.var_T_R, std::string(to_string(r.stop_reason)),
             static_cast<long long>(r.converged), s.to_si_time(o.t_stop)});
  }
  std::vector<double> ts, dp_ratio, pc;
  {
    CsvWriter csv(path_in(c, "moments.csv"),
                  {"t_s", "p_cav", "mean_z_m", "mean_p_kg_m_s", "dz_m", "dp_kg_m_s", "dp_over_dp0"});
    const double dp0 = r.moments.empty() ? 1.0 : r.moments.front().wavenumber_width;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      const auto& mo = r.moments[i];
      csv.row({s.to_si_time(r.times[i]), r.cavity_population[i], s.to_si_length(mo.mean_position),
               s.to_si_momentum(mo.mean_wavenumber), s.to_si_length(mo.position_width),
               s.to_si_momentum(mo.wavenumber_width), mo.wavenumber_width / dp0});
      ts.push_back(s.to_si_time(r.times[i]));
      dp_ratio.push_back(mo.wavenumber_width / dp0);
      pc.push_back(r.cavity_population[i]);
    }
  }
  {
    CsvWriter csv(path_in(c, "wavefunction.csv"), {"z_m", "re_psi", "im_psi", "density"});
    const double amp = 1.0 / std::sqrt(s.length_unit);
    for (std::size_t i = 0; i < o.grid->size(); ++i) {
      const cplx a = o.final_state[i] * amp;
      csv.row({s.to_si_length(o.grid->position(i)), a.real(), a.imag(), std::norm(a)});
    }
  }
  if (c.snapshots) {
    write_snapshot_stream(path_in(c, "snapshots.bin"), r);
    std::vector<double> zs(o.grid->size());
    write_json(path_in(c, "snapshots.json"),
               json{{"layout", "records of (f64 time in reduced units, n_points f64 densities)"},
                    {"n_points", o.grid->size()},
                    {"records", r.snapshots.size()},
                    {"z_min_m", s.to_si_length(o.grid->x_min())},
                    {"dz_m", s.to_si_length(o.grid->dx())},
                    {"time_unit_s", s.time_unit}});
  }
  m.summary = json{{"T_R", o.obs.T_R}, {"T_L", o.obs.T_L}, {"stop_reason", to_string(r.stop_reason)},
                   {"E_over_Vb", e}};
  if (c.svg) {
    svg::line_plot(path_in(c, "moments.svg"), {"Momentum width", "t (s)", "dp(t) / dp(0)", false},
                   {{"dp/dp0", ts, dp_ratio, false}});
    svg::line_plot(path_in(c, "population.svg"), {"Cavity population", "t (s)", "p_cav", false},
                   {{"p_cav", ts, pc, false}});
  }
  if (c.potential_csv) write_potential(c, setup.cavity, s);
}

void write_map_rows(CsvWriter& csv, const SensitivityMap& sm, const std::vector<double>& g_si, const Map2D& T) {
  for (std::size_t i = 0; i < T.rows.size(); ++i) {
    for (std::size_t j = 0; j < T.cols.size(); ++j) {
      csv.row({g_si[i], T.cols[j], T.at(i, j), sm.dT.at(i, j), sm.delta_g.at(i, j), std::string(to_string(sm.variant))});
    }
  }
}

json optimum_json(const SensitivityMap& sm, const std::vector<double>& g_si) {
  try {
    const auto o = map_minimum(sm.delta_g);
    return json{{"delta_g_scaled", o.value}, {"g_m_s2", g_si[o.row]}, {"col", sm.delta_g.cols[o.col]}};
  } catch (const Error&) {
    return json{{"delta_g_scaled", nullptr}};
  }
}

void run_sweep(const ScenarioConfig& c, RunManifest& m, int workers, Execution exec) {
  const TransmitSetup setup = make_transmit_setup(c);
  const Scales& s = setup.scales;
  std::vector<double> tilts;
  for (double g : c.gravity_m_s2) tilts.push_back(s.to_tilt(g));
  std::vector<std::pair<std::size_t, std::size_t>> pts;
  for (std::size_t i = 0; i < tilts.size(); ++i)
    for (std::size_t j = 0; j < c.energy_over_vb.size(); ++j) pts.emplace_back(i, j);
  // Points whose launch energy E + G|x0| is not positive cannot be prepared;
  // they are reported as unreachable and left NaN in the maps.
  auto reachable = [&](const std::pair<std::size_t, std::size_t>& p) {
    return c.energy_over_vb[p.second] + tilts[p.first] * std::abs(setup.packet.center) > 0;
  };
  std::vector<std::pair<std::size_t, std::size_t>> live;
  for (const auto& p : pts)
    if (reachable(p)) live.push_back(p);
  auto live_res = parallel_map(
      live, [&](const auto& p) { return run_transmission(setup, tilts[p.first], c.energy_over_vb[p.second]); },
      workers, exec);
  std::vector<PointResult<TransmitOutcome>> res(pts.size());
  for (std::size_t k = 0, l = 0; k < pts.size(); ++k)
    if (reachable(pts[k])) res[k] = std::move(live_res[l++]);
  Map2D T(tilts, c.energy_over_vb);
  std::size_t unreachable = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto [i, j] = pts[k];
    T.at(i, j) = res[k].ok() ? res[k].value->obs.T_R : kNaN;
    const json coords{{"g_m_s2", c.gravity_m_s2[i]}, {"E_over_Vb", c.energy_over_vb[j]}};
    if (!reachable(pts[k])) {
      PointRecord p;
      p.index = k;
      p.coords = coords;
      p.stop_reason = "unreachable";
      p.converged = false;
      p.diagnostics = json{{"launch_energy_over_Vb", c.energy_over_vb[j] + tilts[i] * std::abs(setup.packet.center)}};
      m.points.push_back(p);
      ++unreachable;
      continue;
    }
    m.points.push_back(record_from(k, coords, res[k], s));
  }
  {
    CsvWriter csv(path_in(c, "sweep_points.csv"), {"g_m_s2", "E_over_Vb", "T_R", "T_L", "stop_reason", "converged"});
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto [i, j] = pts[k];
      const bool ok = res[k].ok();
      csv.row({c.gravity_m_s2[i], c.energy_over_vb[j], ok ? res[k].value->obs.T_R : kNaN,
               ok ? res[k].value->obs.T_L : kNaN, m.points[m.points.size() - pts.size() + k].stop_reason,
               static_cast<long long>(m.points[m.points.size() - pts.size() + k].converged)});
    }
  }
  json summary{{"x0_m", s.to_si_length(setup.packet.center)}, {"unreachable_points", unreachable}};
  if (tilts.size() >= 3 && c.energy_over_vb.size() >= 3) {
    const SensitivityMap full = rel_uncertainty_R(T, setup.packet.center, true);
    const SensitivityMap intrinsic = rel_uncertainty_R(T, setup.packet.center, false);
    CsvWriter csv(path_in(c, "sweep_map.csv"), {"g_m_s2", "E_over_Vb", "T", "dT", "delta_g_scaled", "variant"});
    write_map_rows(csv, full, c.gravity_m_s2, T);
    write_map_rows(csv, intrinsic, c.gravity_m_s2, T);
    summary["optimum_full"] = optimum_json(full, c.gravity_m_s2);
    summary["optimum_intrinsic"] = optimum_json(intrinsic, c.gravity_m_s2);
    summary["stencil"] = full.stencil;
    if (c.svg) {
      const svg::Axes ax_t{"T_R", "E / V_b", "g (m/s^2)", false};
      svg::heatmap(path_in(c, "sweep_T.svg"), ax_t, c.energy_over_vb, c.gravity_m_s2, T.values);
      svg::heatmap(path_in(c, "sweep_delta_g_full.svg"), {"sqrt(N nu) dg_R / g, full", "E / V_b", "g (m/s^2)", false},
                   c.energy_over_vb, c.gravity_m_s2, full.delta_g.values, true);
      svg::heatmap(path_in(c, "sweep_delta_g_intrinsic.svg"),
                   {"sqrt(N nu) dg_R / g, intrinsic", "E / V_b", "g (m/s^2)", false}, c.energy_over_vb, c.gravity_m_s2,
                   intrinsic.delta_g.values, true);
    }
  }
  m.summary = summary;
  if (c.potential_csv) write_potential(c, setup.cavity, s);
}

void run_resonances(const ScenarioConfig& c, RunManifest& m, Execution exec) {
  const Scales s = make_scales(c.params);
  Cavity cav = reduce_cavity(c.params, s);
  cav.tilt = 0;
  ScalingSettings ss = scaling_settings(c, s);
  ss.check_basis = false;
  std::vector<double> tilts;
  for (double g : c.gravity_m_s2) tilts.push_back(s.to_tilt(g));
  const double t0 = detail::wall_clock();
  const auto tracks = track_vs_gravity(cav, tilts, ss, c.solver.tracks, exec);
  PointRecord p;
  p.coords = json{{"tilts", tilts.size()}, {"tracks", tracks.size()}};
  p.stop_reason = "n/a";
  p.wall_seconds = detail::wall_clock() - t0;
  m.points.push_back(p);
  {
    CsvWriter csv(path_in(c, "resonances.csv"),
                  {"g_m_s2", "j", "Er_over_Vb", "Gamma_over_Vb", "theta_rad", "plateau_rad", "crossing"});
    for (std::size_t i = 0; i < tilts.size(); ++i) {
      for (const auto& t : tracks) {
        csv.row({c.gravity_m_s2[i], static_cast<long long>(t.id + 1), t.energies[i], t.widths[i], ss.theta,
                 2.0 * ss.plateau_step * ss.theta, static_cast<long long>(t.crossing[i])});
      }
    }
  }
  std::vector<svg::Series> e_series, w_series;
  {
    CsvWriter csv(path_in(c, "triangular.csv"), {"g_m_s2", "n", "E_over_Vb"});
    for (std::size_t n = 0; n < c.solver.tracks; ++n) {
      svg::Series tri{"triangular n=" + std::to_string(n), {}, {}, true};
      for (std::size_t i = 0; i < tilts.size(); ++i) {
        if (tilts[i] == 0.0) continue;
        Cavity ci = cav;
        ci.tilt = tilts[i];
        const double e = triangular_level(ci, static_cast<int>(n));
        csv.row({c.gravity_m_s2[i], static_cast<long long>(n), e});
        tri.x.push_back(c.gravity_m_s2[i]);
        tri.y.push_back(e);
      }
      e_series.push_back(tri);
    }
  }
  json summary = json::array();
  for (const auto& t : tracks) {
    e_series.push_back({"E_" + std::to_string(t.id + 1), c.gravity_m_s2, t.energies, false});
    w_series.push_back({"Gamma_" + std::to_string(t.id + 1), c.gravity_m_s2, t.widths, false});
    summary.push_back({{"j", t.id + 1},
                       {"triangular_level", t.triangular_level},
                       {"triangular_distance", t.triangular_distance}});
  }
  m.summary = json{{"tracks", summary}};
  if (c.svg) {
    svg::line_plot(path_in(c, "resonances_energy.svg"), {"Resonance energies", "g (m/s^2)", "E_r / V_b", false},
                   e_series);
    svg::line_plot(path_in(c, "resonances_width.svg"), {"Resonance widths", "g (m/s^2)", "Gamma / V_b", true},
                   w_series);
  }
  if (c.potential_csv) write_potential(c, cav, s);
}

void run_asymmetric_scenario(const ScenarioConfig& c, RunManifest& m, int workers, Execution exec) {
  const AsymmetricSetup setup = make_asymmetric_setup(c);
  const Scales& s = setup.scales;
  std::vector<double> tilts;
  for (double g : c.gravity_m_s2) tilts.push_back(s.to_tilt(g));
  std::vector<std::pair<std::size_t, std::size_t>> pts;
  for (std::size_t i = 0; i < tilts.size(); ++i)
    for (std::size_t j = 0; j < c.kick_over_vb.size(); ++j) pts.emplace_back(i, j);
  auto res = parallel_map(
      pts, [&](const auto& p) { return run_asymmetric(setup, tilts[p.first], c.kick_over_vb[p.second]); }, workers, exec);
  Map2D Tm(tilts, c.kick_over_vb), Tp(tilts, c.kick_over_vb);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto [i, j] = pts[k];
    Tm.at(i, j) = res[k].ok() ? res[k].value->obs.T_minus : kNaN;
    Tp.at(i, j) = res[k].ok() ? res[k].value->obs.T_plus : kNaN;
    m.points.push_back(record_from(k, json{{"g_m_s2", c.gravity_m_s2[i]}, {"kick_over_Vb", c.kick_over_vb[j]}}, res[k], s));
  }
  {
    CsvWriter csv(path_in(c, "asymmetric_points.csv"), {"g_m_s2", "kick_over_Vb", "T_plus", "T_minus", "T_R", "T_L"});
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto [i, j] = pts[k];
      const bool ok = res[k].ok();
      csv.row({c.gravity_m_s2[i], c.kick_over_vb[j], Tp.at(i, j), Tm.at(i, j), ok ? res[k].value->obs.T_R : kNaN,
               ok ? res[k].value->obs.T_L : kNaN});
    }
  }
  json summary{{"t_stop_s", s.to_si_time(setup.t_stop)}};
  if (tilts.size() >= 3) {
    const SensitivityMap sm = rel_uncertainty_minus(Tm, Tp);
    CsvWriter csv(path_in(c, "asymmetric_map.csv"), {"g_m_s2", "kick_over_Vb", "T", "dT", "delta_g_scaled", "variant"});
    write_map_rows(csv, sm, c.gravity_m_s2, Tm);
    summary["optimum"] = optimum_json(sm, c.gravity_m_s2);
    if (c.svg) {
      svg::heatmap(path_in(c, "asymmetric_T_minus.svg"), {"T_-", "kick / V_b", "g (m/s^2)", false}, c.kick_over_vb,
                   c.gravity_m_s2, Tm.values);
      svg::heatmap(path_in(c, "asymmetric_delta_g.svg"), {"sqrt(N nu) dg_- / g", "kick / V_b", "g (m/s^2)", false},
                   c.kick_over_vb, c.gravity_m_s2, sm.delta_g.values, true);
    }
  }
  m.summary = summary;
  if (c.potential_csv) write_potential(c, setup.cavity, s);
}

void run_bragg_table(const ScenarioConfig& c, RunManifest& m) {
  const Scales s = make_scales(c.params);
  Cavity cav = reduce_cavity(c.params, s);
  cav.tilt = 0;
  const ScalingSettings ss = scaling_settings(c, s);
  const double t0 = detail::wall_clock();
  const ResonanceSet set = find_resonances(cav, ss);
  const double vb = c.params.barrier_height_J;
  const double kb = c.params.bragg_wavevector_1_m;
  std::vector<BraggRow> rows;
  {
    CsvWriter csv(path_in(c, "bragg_table.csv"),
                  {"j", "Er_over_Vb", "Gamma_over_Vb", "Omega_over_2pi_Hz", "lifetime_s", "plateau_rad"});
    for (const auto& r : set.resonances) {
      const double omega = bragg_rabi(r.energy * vb, r.width * vb, c.params.mass_kg, kb) / (2.0 * constants::pi);
      rows.push_back({r.energy, r.width, omega});
      csv.row({static_cast<long long>(r.index + 1), r.energy, r.width, omega, s.to_si_time(r.lifetime()),
               r.plateau_width});
    }
  }
  PointRecord p;
  p.coords = json{{"g_m_s2", 0.0}};
  p.stop_reason = "n/a";
  p.converged = set.basis_converged;
  p.wall_seconds = detail::wall_clock() - t0;
  p.diagnostics = json{{"basis_shift", set.basis_shift}, {"basis_converged", set.basis_converged}};
  m.points.push_back(p);
  json summary{{"epsilon_fw", epsilon_fw()},
               {"bragg_wavevector_1_m", kb},
               {"barrier_height_J", vb},
               {"basis_shift", set.basis_shift},
               {"resonances", rows.size()}};
  // V_b that best reproduces the reference Omega column from our E_r, Gamma.
  const auto& ref = reference_bragg_rows();
  if (rows.size() >= ref.size()) {
    std::vector<BraggRow> ours(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(ref.size()));
    for (std::size_t i = 0; i < ref.size(); ++i) ours[i].omega_over_2pi_hz = ref[i].omega_over_2pi_hz;
    const double fitted = fit_barrier_height(ours, c.params.mass_kg, kb);
    summary["fitted_barrier_height_J"] = fitted;
    CsvWriter csv(path_in(c, "bragg_table_fitted.csv"), {"j", "Er_over_Vb", "Gamma_over_Vb", "Omega_over_2pi_Hz"});
    for (std::size_t i = 0; i < ours.size(); ++i) {
      const double omega =
          bragg_rabi(ours[i].energy_over_vb * fitted, ours[i].width_over_vb * fitted, c.params.mass_kg, kb) /
          (2.0 * constants::pi);
      csv.row({static_cast<long long>(i + 1), ours[i].energy_over_vb, ours[i].width_over_vb, omega});
    }
  }
  m.summary = summary;
  if (c.potential_csv) write_potential(c, cav, s);
}

void list_outputs(const ScenarioConfig& c, RunManifest& m) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(c.output_dir)) {
    if (!e.is_regular_file()) continue;
    if (e.path().filename() == "manifest.json") continue;
    files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    m.files.push_back({fs::relative(f, c.output_dir).generic_string(), sha256_file(f.string()), fs::file_size(f)});
  }
}

}  // namespace

std::vector<GridPtr> grid_ladder(double half_width, std::size_t points, int extensions) {
  std::vector<GridPtr> g;
  for (int e = 0; e <= extensions; ++e) {
    g.push_back(build_grid(-half_width, half_width, points));
    half_width *= 2.0;
    points *= 2;
  }
  return g;
}

ScalingSettings scaling_settings(const ScenarioConfig& c, const Scales& s) {
  ScalingSettings ss;
  ss.theta = c.solver.theta_rad;
  ss.basis_size = c.solver.basis_size;
  ss.box_half_width = s.to_reduced_length(c.solver.box_half_width_m);
  ss.e_max = c.solver.e_max_over_vb;
  ss.plateau_step = c.solver.plateau_step;
  ss.check_basis = c.solver.check_basis;
  return ss;
}

TransmitSetup make_transmit_setup(const ScenarioConfig& c) {
  TransmitSetup t;
  t.scales = make_scales(c.params);
  t.cavity = reduce_cavity(c.params, t.scales);
  t.packet = reduce_packet(c.params, t.scales);
  t.grids = grid_ladder(t.scales.to_reduced_length(c.grid.half_width_m), c.grid.points, c.grid.max_extensions);
  t.dt = t.scales.to_reduced_time(c.solver.dt_s);
  t.dt_safety = c.solver.dt_safety;
  t.sample_stride = c.solver.sample_stride;
  t.stop = stop_thresholds(c, t.scales);
  return t;
}

TransmitOutcome run_transmission(const TransmitSetup& setup, double tilt, double energy) {
  Cavity cav = setup.cavity;
  cav.tilt = tilt;
  PacketSpec p = setup.packet;
  const double e0 = energy + tilt * std::abs(p.center);
  if (!(e0 > 0)) throw Error(ErrorKind::InvalidParameter, "launch kinetic energy must be positive");
  p.wavenumber = std::sqrt(e0 / cav.stiffness);
  ScatterStop stop = classical_stop_times(cav, p, setup.stop.t_cap);
  stop.cavity_threshold = setup.stop.cavity_threshold;
  stop.zone_threshold = setup.stop.zone_threshold;
  stop.zone_half_width = setup.stop.zone_half_width;
  return on_grid_ladder(setup.grids, [&](const GridPtr& grid) {
    const WaveFunction psi0 = gaussian_packet(p, grid);
    const PotentialField v = cavity_potential(cav, grid);
    EvolveSettings es;
    es.dt = setup.dt > 0 ? setup.dt : choose_time_step(psi0, v, cav.stiffness, setup.dt_safety);
    es.nonlinearity = cav.nonlinearity;
    es.sample_stride = setup.sample_stride;
    es.record_moments = setup.record_moments;
    es.snapshot_stride = setup.snapshot_stride;
    Evolution ev = evolve_until_scattered(psi0, v, cav.stiffness, es, stop);
    TransmitOutcome out;
    out.obs = project(ev.psi, cav);
    out.t_stop = ev.record.times.empty() ? 0.0 : ev.record.times.back();
    out.record = std::move(ev.record);
    out.grid = grid;
    out.final_state = std::move(ev.psi).take_amplitudes();
    return out;
  });
}

double asymmetric_stop_time(const Cavity& cavity, const ScalingSettings& settings) {
  Cavity c0 = cavity;
  c0.tilt = 0;
  ScalingSettings ss = settings;
  ss.check_basis = false;
  const auto set = find_resonances(c0, ss);
  if (set.resonances.size() < 3) throw Error(ErrorKind::NotConverged, "fewer than three resonances found");
  return 2.0 * set.resonances[2].lifetime();
}

AsymmetricSetup make_asymmetric_setup(const ScenarioConfig& c) {
  AsymmetricSetup a;
  a.scales = make_scales(c.params);
  a.cavity = reduce_cavity(c.params, a.scales);
  a.width = a.scales.to_reduced_length(c.asymmetric_width_m);
  a.grids = grid_ladder(a.scales.to_reduced_length(c.asymmetric_grid.half_width_m), c.asymmetric_grid.points,
                        c.asymmetric_grid.max_extensions);
  a.t_stop = c.asymmetric_stop_s > 0 ? a.scales.to_reduced_time(c.asymmetric_stop_s)
                                     : asymmetric_stop_time(a.cavity, scaling_settings(c, a.scales));
  a.dt = a.scales.to_reduced_time(c.solver.dt_s);
  a.dt_safety = c.solver.dt_safety;
  a.sample_stride = c.solver.sample_stride;
  return a;
}

TransmitOutcome run_asymmetric(const AsymmetricSetup& setup, double tilt, double kick) {
  if (!(kick > 0)) throw Error(ErrorKind::InvalidParameter, "kick energy must be positive");
  Cavity cav = setup.cavity;
  cav.tilt = tilt;
  const double k0 = std::sqrt(kick / cav.stiffness);
  return on_grid_ladder(setup.grids, [&](const GridPtr& grid) {
    const WaveFunction psi0 = symmetric_superposition(setup.width, k0, grid, cav);
    const PotentialField v = cavity_potential(cav, grid);
    EvolveSettings es;
    es.dt = setup.dt > 0 ? setup.dt : choose_time_step(psi0, v, cav.stiffness, setup.dt_safety);
    es.t_end = setup.t_stop;
    es.nonlinearity = cav.nonlinearity;
    es.sample_stride = setup.sample_stride;
    Evolution ev = evolve(psi0, v, cav.stiffness, es);
    TransmitOutcome out;
    out.obs = project(ev.psi, cav);
    out.t_stop = ev.record.times.empty() ? 0.0 : ev.record.times.back();
    out.record = std::move(ev.record);
    out.grid = grid;
    out.final_state = std::move(ev.psi).take_amplitudes();
    return out;
  });
}

std::size_t RunManifest::failures() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const PointRecord& p) { return !p.error.empty(); }));
}

json to_json(const RunManifest& m) {
  json pts = json::array();
  for (const auto& p : m.points) {
    json j{{"index", p.index},
           {"coords", p.coords},
           {"stop_reason", p.stop_reason},
           {"converged", p.converged},
           {"wall_seconds", p.wall_seconds}};
    if (!p.error.empty()) j["error"] = p.error;
    if (!p.diagnostics.is_null()) j["diagnostics"] = p.diagnostics;
    pts.push_back(std::move(j));
  }
  json files = json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return json{{"artifact_version", m.version},
              {"scenario", m.scenario},
              {"config", m.config},
              {"points", pts},
              {"failures", m.failures()},
              {"files", files},
              {"summary", m.summary},
              {"wall_seconds", m.wall_seconds}};
}

RunManifest run(const ScenarioConfig& config, int workers, Execution exec) {
  config.validate();
  if (workers <= 0) workers = default_workers();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + config.output_dir);
  }
  RunManifest m;
  m.scenario = config.scenario;
  m.config = config.source.is_null() ? json{{"scenario", config.scenario}, {"params", config.params}} : config.source;
  const double t0 = detail::wall_clock();
  const std::string& sc = config.scenario;
  if (sc == "spectrum") run_spectrum(config, m, exec);
  else if (sc == "transmit") run_transmit(config, m);
  else if (sc == "sweep") run_sweep(config, m, workers, exec);
  else if (sc == "resonances") run_resonances(config, m, exec);
  else if (sc == "asymmetric") run_asymmetric_scenario(config, m, workers, exec);
  else if (sc == "bragg-table") run_bragg_table(config, m);
  m.wall_seconds = detail::wall_clock() - t0;
  list_outputs(config, m);
  // Wall times vary between runs, so they stay out of the checksummed files.
  write_json(path_in(config, "manifest.json"), to_json(m));
  return m;
}

}  // namespace mwfpi
