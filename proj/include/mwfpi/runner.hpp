#pragma once

#include <string>
#include <vector>

#include "mwfpi/config.hpp"
#include "mwfpi/parallel.hpp"
#include "mwfpi/propagator.hpp"
#include "mwfpi/resonances.hpp"
#include "mwfpi/sensing.hpp"

namespace mwfpi {

inline constexpr const char* kVersion = "mwfpi 0.1.0";

/// Everything a transmission run needs in reduced units. `grids` holds the
/// base grid followed by its doublings, tried in turn on boundary reach.
struct TransmitSetup {
  Scales scales;
  Cavity cavity;
  PacketSpec packet;
  std::vector<GridPtr> grids;
  double dt = 0;  // 0: phase rule
  double dt_safety = 1.0;
  std::size_t sample_stride = 20;
  ScatterStop stop;  // thresholds and cap; classical times are filled per point
  bool record_moments = false;
  std::size_t snapshot_stride = 0;
};

struct TransmitOutcome {
  TransmissionObservables obs;
  EvolutionRecord record;
  std::vector<cplx> final_state;  // position amplitudes on `grid`
  GridPtr grid;
  int extensions = 0;
  double t_stop = 0;
};

TransmitSetup make_transmit_setup(const ScenarioConfig& config);

std::vector<GridPtr> grid_ladder(double half_width, std::size_t points, int extensions);

/// Launches the packet from the setup's center with kinetic energy
/// `energy + tilt |x0|` so that `energy` is the classical kinetic energy at
/// the cavity center. Throws InvalidParameter when that is not positive.
TransmitOutcome run_transmission(const TransmitSetup& setup, double tilt, double energy);

struct AsymmetricSetup {
  Scales scales;
  Cavity cavity;
  double width = 3.0;
  std::vector<GridPtr> grids;
  double t_stop = 0;
  double dt = 0;
  double dt_safety = 1.0;
  std::size_t sample_stride = 20;
};

/// Twice the lifetime of the third g = 0 resonance, in reduced time.
double asymmetric_stop_time(const Cavity& cavity, const ScalingSettings& settings);

AsymmetricSetup make_asymmetric_setup(const ScenarioConfig& config);

/// Symmetric +-k superposition at the cavity center with kinetic energy
/// `kick` per branch, evolved for t_stop.
TransmitOutcome run_asymmetric(const AsymmetricSetup& setup, double tilt, double kick);

ScalingSettings scaling_settings(const ScenarioConfig& config, const Scales& scales);

struct PointRecord {
  std::size_t index = 0;
  json coords;
  std::string stop_reason;
  bool converged = true;
  double wall_seconds = 0;
  std::string error;
  json diagnostics;
};

struct FileEntry {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string version = kVersion;
  std::string scenario;
  json config;
  std::vector<PointRecord> points;
  std::vector<FileEntry> files;
  json summary = json::object();
  double wall_seconds = 0;

  std::size_t failures() const;
};

json to_json(const RunManifest& m);

/// Executes the scenario, writes its outputs and manifest.json into
/// config.output_dir and returns the manifest. Per-point failures are
/// recorded, not thrown.
RunManifest run(const ScenarioConfig& config, int workers = 0, Execution exec = Execution::Parallel);

}  // namespace mwfpi
