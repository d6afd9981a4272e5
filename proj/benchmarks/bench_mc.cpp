#include <benchmark/benchmark.h>

#include "saddlekit/mc.hpp"

using namespace saddlekit;

static void BM_TorusCounts(benchmark::State& state) {
  const auto samples = sample_torus_haar(1000, 7, 50);
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(torus_counts(samples, R));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TorusCounts)->Arg(5)->Arg(20);

static void BM_CuspMoments(benchmark::State& state) {
  const TestFunction f = DiscIndicator{20};
  for (auto _ : state) benchmark::DoNotOptimize(haar_cusp_moments(f, 50).mean);
}
BENCHMARK(BM_CuspMoments);

static void BM_StratumValues(benchmark::State& state) {
  const auto samples = sample_stratum_local(octagon_surface(), 0.3, 100, 3);
  const TestFunction f = DiscIndicator{ratio(1, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(stratum_values(samples, f));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_StratumValues);

BENCHMARK_MAIN();
