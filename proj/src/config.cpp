#include "mwfpi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mwfpi {

void to_json(json& j, const ModelParams& p) {
  j = json{{"mass_kg", p.mass_kg},
           {"gravity_m_s2", p.gravity_m_s2},
           {"barrier_height_J", p.barrier_height_J},
           {"barrier_width_m", p.barrier_width_m},
           {"cavity_length_m", p.cavity_length_m},
           {"interaction_J_m", p.interaction_J_m},
           {"packet_width_m", p.packet_width_m},
           {"packet_center_m", p.packet_center_m},
           {"packet_momentum_kg_m_s", p.packet_momentum_kg_m_s},
           {"recoil_velocity_m_s", p.recoil_velocity_m_s},
           {"bragg_wavevector_1_m", p.bragg_wavevector_1_m}};
}

void from_json(const json& j, ModelParams& p) {
  auto get = [&](const char* key, double& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<double>();
  };
  get("mass_kg", p.mass_kg);
  get("gravity_m_s2", p.gravity_m_s2);
  get("barrier_height_J", p.barrier_height_J);
  get("barrier_width_m", p.barrier_width_m);
  get("cavity_length_m", p.cavity_length_m);
  get("interaction_J_m", p.interaction_J_m);
  get("packet_width_m", p.packet_width_m);
  get("packet_center_m", p.packet_center_m);
  get("packet_momentum_kg_m_s", p.packet_momentum_kg_m_s);
  get("recoil_velocity_m_s", p.recoil_velocity_m_s);
  get("bragg_wavevector_1_m", p.bragg_wavevector_1_m);
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"spectrum", "transmit", "sweep", "resonances", "asymmetric",
                                                 "bragg-table"};
  return names;
}

json default_config_json() {
  return json::parse(R"({
  "scenario": "",
  "params": {
    "mass_kg": 1.4431609e-25,
    "gravity_m_s2": 0.0,
    "barrier_height_J": 3.78e-32,
    "barrier_width_m": 1e-6,
    "cavity_length_m": 15e-6,
    "interaction_J_m": 0.0,
    "packet_width_m": 12e-6,
    "packet_center_m": -49.5e-6,
    "packet_momentum_kg_m_s": 0.0,
    "recoil_velocity_m_s": 5.8845e-3,
    "bragg_wavevector_1_m": null
  },
  "grid": {"half_width_m": 4.096e-3, "points": 16384, "max_extensions": 2},
  "solver": {
    "dt_s": 0,
    "dt_safety": 1.0,
    "sample_stride": 20,
    "t_cap_s": 10.0,
    "cavity_threshold": 0.01,
    "zone_threshold": 1e-3,
    "zone_half_width_m": 3e-6,
    "theta_rad": 0.15,
    "basis_size": 512,
    "box_half_width_m": 80e-6,
    "e_max_over_vb": 1.2,
    "plateau_step": 0.1,
    "check_basis": true,
    "tracks": 3,
    "spectrum_tol": 1e-6
  },
  "axes": {
    "gravity_m_s2": {"min": -1.5e-3, "max": 1.5e-3, "count": 30},
    "energy_over_vb": {"min": 0.05, "max": 1.3, "count": 30},
    "kick_over_vb": {"min": 0.3, "max": 0.9, "count": 4}
  },
  "spectrum": {"energy_over_vb": {"min": 0.005, "max": 1.5, "count": 1000}, "overlay": true},
  "resonances": {"gravity_m_s2": {"min": -0.06, "max": 0.06, "count": 41}},
  "transmit": {"energy_over_vb": 0.77},
  "asymmetric": {
    "packet_width_m": 3e-6,
    "stop_time_s": 0,
    "gravity_m_s2": {"min": -1e-3, "max": 1e-3, "count": 5},
    "grid": {"half_width_m": 16.384e-3, "points": 131072, "max_extensions": 1}
  },
  "output": {"dir": "out", "svg": true, "snapshots": false, "potential_csv": false}
})");
}

void merge(json& base, const json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
      merge(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::Config, "override must look like key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw Error(ErrorKind::Config, "empty path component in " + key);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::vector<double> parse_axis(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_number()) return {j.get<double>()};
  if (j.is_object()) {
    const double lo = j.at("min").get<double>();
    const double hi = j.at("max").get<double>();
    const int n = j.at("count").get<int>();
    if (n < 1) throw Error(ErrorKind::Config, "axis count must be >= 1");
    if (n == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    // Symmetric axes with an odd count hit zero exactly.
    if (lo == -hi && n % 2 == 1) v[static_cast<std::size_t>(n / 2)] = 0.0;
    return v;
  }
  throw Error(ErrorKind::Config, "axis must be a list, a number or {min, max, count}");
}

namespace {
GridSpec parse_grid(const json& j, GridSpec g) {
  if (j.contains("half_width_m")) g.half_width_m = j["half_width_m"].get<double>();
  if (j.contains("points")) g.points = j["points"].get<std::size_t>();
  if (j.contains("max_extensions")) g.max_extensions = j["max_extensions"].get<int>();
  return g;
}

void check_axis(const std::vector<double>& a, const char* name) {
  if (a.empty()) throw Error(ErrorKind::Config, std::string(name) + " axis is empty");
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) throw Error(ErrorKind::Config, std::string(name) + " axis must be strictly increasing");
  }
}
}  // namespace

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig c;
  try {
    c.source = doc;
    c.scenario = doc.value("scenario", "");
    c.params = doc.at("params").get<ModelParams>();
    const json& pj = doc.at("params");
    if (!pj.contains("bragg_wavevector_1_m") || pj.at("bragg_wavevector_1_m").is_null()) {
      c.params.bragg_wavevector_1_m = c.params.default_bragg_wavevector();
    }
    c.grid = parse_grid(doc.value("grid", json::object()), c.grid);
    const json& s = doc.at("solver");
    c.solver.dt_s = s.value("dt_s", c.solver.dt_s);
    c.solver.dt_safety = s.value("dt_safety", c.solver.dt_safety);
    c.solver.sample_stride = s.value("sample_stride", c.solver.sample_stride);
    c.solver.t_cap_s = s.value("t_cap_s", c.solver.t_cap_s);
    c.solver.cavity_threshold = s.value("cavity_threshold", c.solver.cavity_threshold);
    c.solver.zone_threshold = s.value("zone_threshold", c.solver.zone_threshold);
    c.solver.zone_half_width_m = s.value("zone_half_width_m", c.solver.zone_half_width_m);
    c.solver.theta_rad = s.value("theta_rad", c.solver.theta_rad);
    c.solver.basis_size = s.value("basis_size", c.solver.basis_size);
    c.solver.box_half_width_m = s.value("box_half_width_m", c.solver.box_half_width_m);
    c.solver.e_max_over_vb = s.value("e_max_over_vb", c.solver.e_max_over_vb);
    c.solver.plateau_step = s.value("plateau_step", c.solver.plateau_step);
    c.solver.check_basis = s.value("check_basis", c.solver.check_basis);
    c.solver.tracks = s.value("tracks", c.solver.tracks);
    c.solver.spectrum_tol = s.value("spectrum_tol", c.solver.spectrum_tol);

    const json& axes = doc.at("axes");
    const json empty = json::object();
    const json& sec = doc.contains(c.scenario) ? doc.at(c.scenario) : empty;
    auto axis = [&](const char* name) {
      if (sec.contains(name)) return parse_axis(sec.at(name));
      if (axes.contains(name)) return parse_axis(axes.at(name));
      return std::vector<double>{};
    };
    c.gravity_m_s2 = axis("gravity_m_s2");
    c.energy_over_vb = axis("energy_over_vb");
    c.kick_over_vb = axis("kick_over_vb");

    if (doc.contains("transmit")) c.transmit_energy_over_vb = doc["transmit"].value("energy_over_vb", -1.0);
    if (doc.contains("asymmetric")) {
      const json& a = doc["asymmetric"];
      c.asymmetric_width_m = a.value("packet_width_m", c.asymmetric_width_m);
      c.asymmetric_stop_s = a.value("stop_time_s", c.asymmetric_stop_s);
      if (a.contains("grid")) c.asymmetric_grid = parse_grid(a["grid"], c.asymmetric_grid);
    }
    if (doc.contains("spectrum")) c.spectrum_overlay = doc["spectrum"].value("overlay", true);
    if (doc.contains("output")) {
      const json& o = doc["output"];
      c.output_dir = o.value("dir", c.output_dir);
      c.svg = o.value("svg", c.svg);
      c.snapshots = o.value("snapshots", c.snapshots);
      c.potential_csv = o.value("potential_csv", c.potential_csv);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  return c;
}

void ScenarioConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    throw Error(ErrorKind::Config, "unknown scenario '" + scenario + "'");
  }
  try {
    params.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  if (!is_power_of_two(grid.points) || grid.points < 256) throw Error(ErrorKind::Config, "grid.points must be a power of two >= 256");
  if (!(grid.half_width_m > 0)) throw Error(ErrorKind::Config, "grid.half_width_m must be positive");
  if (solver.dt_s < 0 || !(solver.dt_safety > 0)) throw Error(ErrorKind::Config, "invalid time-step settings");
  if (!(solver.t_cap_s > 0)) throw Error(ErrorKind::Config, "solver.t_cap_s must be positive");
  if (scenario == "spectrum") check_axis(energy_over_vb, "energy_over_vb");
  if (scenario == "sweep") {
    check_axis(gravity_m_s2, "gravity_m_s2");
    check_axis(energy_over_vb, "energy_over_vb");
  }
  if (scenario == "resonances") {
    check_axis(gravity_m_s2, "gravity_m_s2");
    if (std::find(gravity_m_s2.begin(), gravity_m_s2.end(), 0.0) == gravity_m_s2.end()) {
      throw Error(ErrorKind::Config, "resonances gravity axis must contain 0");
    }
  }
  if (scenario == "asymmetric") {
    check_axis(gravity_m_s2, "gravity_m_s2");
    check_axis(kick_over_vb, "kick_over_vb");
    if (!is_power_of_two(asymmetric_grid.points)) throw Error(ErrorKind::Config, "asymmetric.grid.points must be a power of two");
  }
  if (scenario == "transmit" && transmit_energy_over_vb < 0 && params.packet_momentum_kg_m_s <= 0) {
    throw Error(ErrorKind::Config, "transmit needs transmit.energy_over_vb or params.packet_momentum_kg_m_s");
  }
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                           const std::string& scenario) {
  json doc = default_config_json();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config " + path);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    merge(doc, user);
  }
  if (!scenario.empty()) doc["scenario"] = scenario;
  for (const auto& o : overrides) apply_override(doc, o);
  ScenarioConfig c = parse_config(doc);
  c.validate();
  return c;
}

}  // namespace mwfpi
