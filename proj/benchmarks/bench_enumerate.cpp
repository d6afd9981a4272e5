#include <benchmark/benchmark.h>

#include "saddlekit/geodesic.hpp"
#include "saddlekit/oracle.hpp"

using namespace saddlekit;

static void BM_EnumerateTorus(benchmark::State& state) {
  const auto s = square_torus();
  const Rational R(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count(s, R));
}
BENCHMARK(BM_EnumerateTorus)->Arg(5)->Arg(10)->Arg(20);

static void BM_EnumerateSlit(benchmark::State& state) {
  const auto s = slit_torus({ratio(1, 3), ratio(1, 5)});
  const Rational R(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count(s, R));
}
BENCHMARK(BM_EnumerateSlit)->Arg(5)->Arg(10);

static void BM_EnumerateOctagon(benchmark::State& state) {
  const auto s = octagon_surface();
  const Rational R(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count(s, R));
}
BENCHMARK(BM_EnumerateOctagon)->Arg(4)->Arg(8);

static void BM_TorusOracle(benchmark::State& state) {
  const ExactMatrix g{ratio(3, 2), ratio(7, 5), ratio(1, 3), ratio(19, 15)};
  const Rational R(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(torus_holonomy(g, R));
}
BENCHMARK(BM_TorusOracle)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
