#include <benchmark/benchmark.h>

#include <random>

#include "saddlekit/delaunay.hpp"

using namespace saddlekit;

static void BM_DelaunaySkewTorus(benchmark::State& state) {
  const auto s = lattice_torus(ExactMatrix{1, static_cast<long>(state.range(0)), 0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_l1(s).flip_count);
}
BENCHMARK(BM_DelaunaySkewTorus)->Arg(3)->Arg(10)->Arg(30);

static void BM_DelaunayOctagon(benchmark::State& state) {
  const auto s = octagon_surface();
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_l1(s).flip_count);
}
BENCHMARK(BM_DelaunayOctagon);

static void BM_DelaunayPlanar(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(0, 999);
  std::vector<ExactVector> pts;
  while (pts.size() < static_cast<std::size_t>(state.range(0))) {
    pts.push_back({ratio(d(rng), 97), ratio(d(rng), 99)});
  }
  const PlanarTorus torus = wrap_planar(pts);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_l1(torus.surface).flip_count);
}
BENCHMARK(BM_DelaunayPlanar)->Arg(10)->Arg(25)->Arg(50);

BENCHMARK_MAIN();
