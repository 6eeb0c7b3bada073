#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mwfpi/core_model.hpp"
#include "mwfpi/potentials.hpp"
#include "mwfpi/wavepackets.hpp"

namespace mwfpi {

class FftPlan;

enum class StopReason { TimeLimit, CavityEmpty, BounceGuard };
const char* to_string(StopReason r);

/// Reduced-unit history of one evolution. Samples are taken every
/// `sample_stride` steps (and at t = 0).
struct EvolutionRecord {
  std::vector<double> times;
  std::vector<double> cavity_population;
  std::vector<PacketMoments> moments;              // if requested
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;      // densities, if requested
  StopReason stop_reason = StopReason::TimeLimit;
  bool converged = true;  // false when the hard cap fired with p_cav >= threshold
  std::size_t steps = 0;
  double dt = 0;
};

struct EvolveSettings {
  double dt = 0.05;
  double t_end = 0;
  double nonlinearity = 0;         // reduced gamma
  std::size_t sample_stride = 20;  // steps between samples
  bool record_moments = false;
  std::size_t snapshot_stride = 0;  // samples between snapshots, 0 = off
  double edge_threshold = 1e-8;
};

/// Strang split-step integrator, kinetic half steps fused between
/// consecutive steps. A linear term slope * x of the potential is carried in
/// the velocity gauge psi = exp(-i slope t x) phi, so the kinetic factor
/// becomes exp(-i stiffness \int (k - slope s)^2 ds) and the momentum grid
/// only has to hold the canonical momentum. Densities are gauge invariant.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const WaveFunction& psi0, const PotentialField& v, double stiffness, double dt,
                      double nonlinearity = 0.0);

  void advance(std::size_t n_steps);
  double time() const { return time_; }
  double dt() const { return dt_; }
  /// Gauge-transformed amplitudes phi; |phi|^2 = |psi|^2.
  const std::vector<cplx>& amplitudes() const { return psi_; }
  /// Physical wave function in position representation.
  WaveFunction wave_function() const;
  /// Physical moments (mean wavenumber shifted back by -slope t).
  PacketMoments physical_moments() const;
  /// Largest |psi|^2 at the two outermost grid points.
  double edge_density() const;
  /// Largest continuous-normalized |phi~|^2 at the Nyquist bins, measured at
  /// the last transform of the previous advance().
  double momentum_edge_density() const { return k_edge_; }

 private:
  void apply_potential();
  void apply_kinetic(double t0, double h);

  GridPtr grid_;
  std::shared_ptr<const FftPlan> plan_;
  std::vector<cplx> psi_;
  std::vector<cplx> kin_half_;
  std::vector<cplx> kin_full_;
  std::vector<cplx> pot_phase_;
  std::vector<double> pot_;
  std::vector<cplx> kin_tilt_;   // full-step factor at kin_t_ (tilted case)
  std::vector<cplx> kin_ratio_;
  double kin_t_ = 0;
  std::size_t kin_age_ = 256;
  double stiffness_;
  double slope_;
  double dt_;
  double gamma_;
  double time_ = 0;
  double k_edge_ = 0;
};

/// <H> = stiffness <k^2> + <v> + gamma/2 <|psi|^2>.
double energy(const WaveFunction& psi, const PotentialField& v, double stiffness, double nonlinearity = 0.0);

/// Step from the phase rules: stiffness k_s^2 dt < 0.5 where k_s bounds the
/// significant momentum content (raised by the largest potential drop), and
/// (max v - min v) dt < 0.1 over the region the state and the barriers
/// occupy, with the linear part excluded. The result is divided by `safety`.
double choose_time_step(const WaveFunction& psi, const PotentialField& v, double stiffness, double safety = 1.0);

/// Cavity bounds [x_-, x_+] taken from the outermost barrier centers.
std::pair<double, double> cavity_bounds(const PotentialDescriptor& d);

struct Evolution {
  WaveFunction psi;
  EvolutionRecord record;
};

/// Fixed-duration evolution. Throws BoundaryReach when |psi|^2 at a grid edge
/// or at the momentum-grid edge exceeds the threshold.
Evolution evolve(const WaveFunction& psi0, const PotentialField& v, double stiffness, const EvolveSettings& settings);

struct ScatterStop {
  double t_cap = 1e4;
  double cavity_threshold = 0.01;
  double zone_half_width = 3.0;   // around each barrier center
  double zone_threshold = 1e-3;   // integrated |psi|^2 in those zones
  double earliest = 0;            // no cavity-empty stop before this time
  double bounce_guard = std::numeric_limits<double>::infinity();
};

/// Classical times for a packet launched from spec.center toward the cavity:
/// `earliest` is the arrival of the center at x = 0. The bounce guard is the
/// apex time of the transmitted packet for tilt > 0 and the time the reflected
/// packet's leading edge returns to x_- for tilt < 0.
ScatterStop classical_stop_times(const Cavity& cavity, const PacketSpec& spec, double t_cap);

/// Runs until the cavity has emptied (p_cav below threshold, barrier zones
/// clear, past `earliest`), the bounce guard or the cap. A cap stop with
/// p_cav >= threshold is flagged through record.converged.
Evolution evolve_until_scattered(const WaveFunction& psi0, const PotentialField& v, double stiffness,
                                 const EvolveSettings& settings, const ScatterStop& stop);

struct Carpet {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<std::vector<double>> density;  // [time][position]
};

/// |psi(x, t)|^2 every `time_stride` steps on [x_lo, x_hi] (every `x_stride`-th point).
Carpet carpet(const WaveFunction& psi0, const PotentialField& v, double stiffness, const EvolveSettings& settings,
              std::size_t time_stride, double x_lo, double x_hi, std::size_t x_stride = 1);

/// Binary stream of records (f64 time, n f64 densities), little-endian host order.
void write_snapshot_stream(const std::string& path, const EvolutionRecord& record);
std::vector<std::pair<double, std::vector<double>>> read_snapshot_stream(const std::string& path, std::size_t n_points);

}  // namespace mwfpi
