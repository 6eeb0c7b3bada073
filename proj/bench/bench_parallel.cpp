// Serial reference vs OpenMP paths on the same inputs.
#include <benchmark/benchmark.h>

#include "mwfpi/resonances.hpp"
#include "mwfpi/runner.hpp"
#include "mwfpi/scattering.hpp"

using namespace mwfpi;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void BM_Spectrum(benchmark::State& st) {
  const Cavity cav;
  std::vector<double> e(2000);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 0.005 + 1.5 * i / (e.size() - 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(transmission_values(cav, e, 984, mode(st)));
}
BENCHMARK(BM_Spectrum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ResonanceTracking(benchmark::State& st) {
  const Cavity cav;
  const ScalingSettings ss;
  std::vector<double> tilts;
  for (int i = -4; i <= 4; ++i) tilts.push_back(0.006 * i);
  for (auto _ : st) benchmark::DoNotOptimize(track_vs_gravity(cav, tilts, ss, 2, mode(st)));
}
BENCHMARK(BM_ResonanceTracking)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_TransmissionMap(benchmark::State& st) {
  TransmitSetup setup;
  setup.scales = make_scales(ModelParams::defaults());
  setup.cavity = reduce_cavity(ModelParams::defaults(), setup.scales);
  setup.packet = reduce_packet(ModelParams::defaults(), setup.scales);
  setup.grids = grid_ladder(2048.0, 8192, 1);
  setup.stop.t_cap = 3000;
  const std::vector<double> energies{0.6, 0.8, 1.0, 1.2};
  for (auto _ : st) {
    auto r = parallel_map(energies, [&](double e) { return run_transmission(setup, 0.0, e).obs.T_R; }, 0, mode(st));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TransmissionMap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
