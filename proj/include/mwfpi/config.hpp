#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mwfpi/core_model.hpp"

namespace mwfpi {

using json = nlohmann::json;

void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);

/// Symmetric simulation box in SI units.
struct GridSpec {
  double half_width_m = 4.096e-3;
  std::size_t points = 16384;
  int max_extensions = 2;  // doublings of box and point count on boundary reach
};

struct SolverSettings {
  double dt_s = 0;          // 0 selects the phase-rule step
  double dt_safety = 1.0;
  std::size_t sample_stride = 20;
  double t_cap_s = 10.0;
  double cavity_threshold = 0.01;
  double zone_threshold = 1e-3;
  double zone_half_width_m = 3e-6;
  double theta_rad = 0.15;
  std::size_t basis_size = 512;
  double box_half_width_m = 80e-6;
  double e_max_over_vb = 1.2;
  double plateau_step = 0.1;
  bool check_basis = true;
  std::size_t tracks = 3;
  double spectrum_tol = 1e-6;
};

struct ScenarioConfig {
  std::string scenario;
  ModelParams params;
  GridSpec grid;
  GridSpec asymmetric_grid{16.384e-3, 131072, 1};
  SolverSettings solver;
  std::vector<double> gravity_m_s2;    // sweep / resonances / asymmetric rows
  std::vector<double> energy_over_vb;  // spectrum / sweep columns
  std::vector<double> kick_over_vb;    // asymmetric columns
  double transmit_energy_over_vb = -1;  // < 0: derive from packet_momentum_kg_m_s
  double asymmetric_width_m = 3e-6;
  double asymmetric_stop_s = 0;         // 0: twice the lifetime of the third resonance
  bool spectrum_overlay = true;
  std::string output_dir = "out";
  bool svg = true;
  bool snapshots = false;
  bool potential_csv = false;
  json source;  // merged document as run

  void validate() const;
};

const std::vector<std::string>& scenario_names();

/// Built-in defaults as a JSON document (mirrors configs/defaults.json).
json default_config_json();

/// Deep-merges `patch` into `base`.
void merge(json& base, const json& patch);

/// Applies "a.b.c=value"; value is parsed as JSON and falls back to a string.
void apply_override(json& doc, const std::string& assignment);

/// Axis given as a list or as {"min", "max", "count"}.
std::vector<double> parse_axis(const json& j);

ScenarioConfig parse_config(const json& doc);
/// Reads the file, merges over the defaults, applies overrides, validates.
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {},
                           const std::string& scenario = "");

}  // namespace mwfpi
