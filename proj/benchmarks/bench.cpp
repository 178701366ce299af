#include <benchmark/benchmark.h>

#include <random>

#include "hats/construct.hpp"
#include "hats/nine_vertex.hpp"
#include "hats/sat.hpp"
#include "support/support.hpp"

namespace {

hats::Strategy random_cycle_strategy(std::size_t n) {
  std::mt19937_64 rng(n);
  return hats::test::random_strategy(rng, hats::test::cycle_graph(n));
}

void BM_Enumerate(benchmark::State& state) {
  hats::Strategy s = random_cycle_strategy(static_cast<std::size_t>(state.range(0)));
  hats::EnumerationOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hats::enumerate_disproving(s, hats::Hint::none(), opt).count);
}
BENCHMARK(BM_Enumerate)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_Elimination(benchmark::State& state) {
  hats::Strategy s = random_cycle_strategy(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hats::count_by_elimination(s, hats::Hint::none()));
}
BENCHMARK(BM_Elimination)->DenseRange(6, 30, 6);

void BM_Encode(benchmark::State& state) {
  hats::Graph g = hats::test::cycle_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hats::encode_cnf(g, hats::Hint::none()).cnf.clauses.size());
}
BENCHMARK(BM_Encode)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_SynthesizeCycle(benchmark::State& state) {
  hats::Graph g = hats::test::cycle_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hats::synthesize(g, hats::Hint::none(), hats::internal_solver()).win);
}
BENCHMARK(BM_SynthesizeCycle)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ClassifyTheta(benchmark::State& state) {
  hats::Graph g = hats::theta_strategy(2, 2, 3).graph();
  for (auto _ : state) benchmark::DoNotOptimize(hats::classify(g).outcome);
}
BENCHMARK(BM_ClassifyTheta)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
