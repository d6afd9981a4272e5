#include <benchmark/benchmark.h>

#include <random>

#include "saddlekit/chew.hpp"
#include "saddlekit/geodesic.hpp"

using namespace saddlekit;

static void BM_ChewTorusConnections(benchmark::State& state) {
  const auto t = delaunay_l1(lattice_torus(ExactMatrix{ratio(3, 2), ratio(7, 5), ratio(1, 3), ratio(19, 15)}));
  const auto set = enumerate(t.surface, Rational(state.range(0)));
  for (auto _ : state) {
    for (const auto& c : set.connections) benchmark::DoNotOptimize(chew_path(t, c).steps.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()));
}
BENCHMARK(BM_ChewTorusConnections)->Arg(5)->Arg(10);

static void BM_PlanarChewAllPairs(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(0, 999);
  std::vector<ExactVector> pts;
  while (pts.size() < static_cast<std::size_t>(state.range(0))) {
    pts.push_back({ratio(d(rng), 97), ratio(d(rng), 99)});
  }
  const PlanarDelaunay pd = planar_delaunay(pts);
  const int n = static_cast<int>(pts.size());
  for (auto _ : state) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) benchmark::DoNotOptimize(within_sqrt10(planar_chew(pd, a, b)));
    }
  }
  state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}
BENCHMARK(BM_PlanarChewAllPairs)->Arg(10)->Arg(30);

BENCHMARK_MAIN();
