// Serial reference vs OpenMP kernels: Monte Carlo blocks and a theory grid.

#include <benchmark/benchmark.h>

#include "macdet/error_probability.hpp"
#include "macdet/model.hpp"
#include "macdet/montecarlo.hpp"
#include "macdet/sweep.hpp"

namespace {

macdet::ModelParams case3_params() { return macdet::validate_params(0.45, 0.1, 0.15, 0.5, 1.0, 1.0); }

macdet::SimConfig sim_config(std::uint64_t trials, int threads) {
  const auto p = case3_params();
  const auto alloc = macdet::optimal_allocation(p);
  macdet::SimConfig cfg;
  cfg.trials = trials;
  cfg.seed = 7;
  cfg.power1 = alloc.p1_star;
  cfg.power2 = alloc.p2_star;
  cfg.threads = threads;
  return cfg;
}

void BM_SimulateSerial(benchmark::State& state) {
  const auto p = case3_params();
  const auto cfg = sim_config(static_cast<std::uint64_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(macdet::simulate_serial(p, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto p = case3_params();
  const auto cfg = sim_config(static_cast<std::uint64_t>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(macdet::simulate(p, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TheoryGrid(benchmark::State& state) {
  macdet::SweepSpec spec;
  spec.base = case3_params();
  spec.axes = {macdet::parse_axis("power1:0.05:1:40"), macdet::parse_axis("power2:0.05:1:40")};
  spec.schemes = {macdet::SweepScheme::MacAsym};
  spec.trials = 0;
  spec.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(macdet::run_sweep(spec));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)
    ->Args({1 << 20, 1})
    ->Args({1 << 20, 2})
    ->Args({1 << 20, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoryGrid)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
