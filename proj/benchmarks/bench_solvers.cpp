#include <benchmark/benchmark.h>

#include "benign/concentration.hpp"
#include "benign/interpolators.hpp"
#include "benign/scenario.hpp"

using namespace benign;

namespace {

// Square-law instance: p = n^2, eps = 1/n^2, k = 5.
Dataset square_law(std::size_t n) {
  const auto params = ScenarioParams::with_symmetric_head(5, n * n, n, 1.0 / double(n * n), 1.0, 1.0);
  return generate(params, {1, "bench", n});
}

void BM_MinL1(benchmark::State& state) {
  const Dataset d = square_law(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_l1(d.x, d.y));
}
BENCHMARK(BM_MinL1)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MinL1Bland(benchmark::State& state) {
  const Dataset d = square_law(static_cast<std::size_t>(state.range(0)));
  LpOptions options;
  options.pivot_rule = PivotRule::Bland;
  for (auto _ : state) benchmark::DoNotOptimize(min_l1(d.x, d.y, options));
}
BENCHMARK(BM_MinL1Bland)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MinL2(benchmark::State& state) {
  const Dataset d = square_law(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_l2(d.x, d.y));
}
BENCHMARK(BM_MinL2)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GramSolve(benchmark::State& state) {
  const Dataset d = square_law(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gram_solve(d.x, d.y));
}
BENCHMARK(BM_GramSolve)->Arg(32)->Arg(64);

void BM_OpNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset d = square_law(n);
  for (auto _ : state) benchmark::DoNotOptimize(op_norm(d.x));
}
BENCHMARK(BM_OpNorm)->Arg(16)->Arg(32);

void BM_SparseOpNormExhaustive(benchmark::State& state) {
  const auto params = ScenarioParams::with_symmetric_head(5, 17, 100, 0.01, 1.0, 1.0);
  const Dataset d = generate(params, {1, "bench", 0});
  for (auto _ : state)
    benchmark::DoNotOptimize(sparse_opnorm_max(d.x, 5, 3, SearchMode::Exhaustive));
}
BENCHMARK(BM_SparseOpNormExhaustive)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
