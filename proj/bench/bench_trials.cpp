#include <benchmark/benchmark.h>

#include "mcsense/experiment.hpp"

using namespace mcsense;

namespace {

ExperimentConfig bench_config(int trials) {
  auto cfg = default_config();
  cfg.trials = trials;
  return cfg;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto pattern = resolve_pattern(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_trials_serial(cfg, pattern, 5.0, 64));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto pattern = resolve_pattern(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_trials(cfg, pattern, 5.0, 64));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
