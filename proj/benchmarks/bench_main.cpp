// Microbenchmarks for the three hot paths: the lambda quadrature, the kernel
// Monte Carlo and the word-metric BFS.

#include <benchmark/benchmark.h>

#include "hsf/embeddings.hpp"
#include "hsf/heisenberg.hpp"
#include "hsf/integrate.hpp"
#include "hsf/lattice.hpp"
#include "hsf/monte_carlo.hpp"

namespace {

void BM_LambdaIntegral(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 2.0;
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsf::lambda_integral(s, 1.0 - s, p, 0.25));
    s = s < 0.9 ? s + 0.01 : 0.1;
  }
}
BENCHMARK(BM_LambdaIntegral)->Arg(4)->Arg(5)->Arg(8);

void BM_ReprDistance(benchmark::State& state) {
  const auto params = hsf::params_from(2.5, 0.5);
  const hsf::GroupPoint x(1.0, 2.0, 3.0), y(-1.0, 0.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hsf::repr_distance(x, y, params));
}
BENCHMARK(BM_ReprDistance);

void BM_KernelNorm(benchmark::State& state) {
  const auto params = hsf::params_from(2.5, 0.5);
  const hsf::GroupPoint x(0.5, 0.2, 0.3);
  hsf::MCConfig config{state.range(0), 1, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsf::mc_kernel_norm(x, params, config));
    ++config.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KernelNorm)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_WordBall(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hsf::word_ball(r));
}
BENCHMARK(BM_WordBall)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_WordDistance(benchmark::State& state) {
  const hsf::LatticeElement target{0, 0, state.range(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hsf::word_distance(hsf::kLatticeIdentity, target));
  }
}
BENCHMARK(BM_WordDistance)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
