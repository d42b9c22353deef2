// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "blockergm/blockmodel.hpp"
#include "blockergm/cut.hpp"
#include "blockergm/exact.hpp"
#include "blockergm/sampler.hpp"
#include "blockergm/variational.hpp"

using namespace blockergm;

namespace {

ColoredGraph random_graph(int n, std::uint64_t seed) {
  const FinitePartition fp = build_finite_partition(n, LimitPartition({0.2, 0.3, 0.5}));
  ColoredGraph g(fp);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.set_edge(u, v, true);
  return g;
}

StepKernel random_kernel(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StepKernel d;
  d.colors = 1;
  for (int r = 0; r <= m; ++r) d.boundaries.push_back(static_cast<double>(r) / m);
  d.coloring.assign(static_cast<std::size_t>(m), 0);
  d.values.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = r; s < m; ++s) d.values[r * m + s] = d.values[s * m + r] = 2.0 * unit(rng) - 1.0;
  return d;
}

const ModelParams kTwoBlock = ModelParams::constant(2, 1.0, -0.2);
const LimitPartition kHalves({0.5, 0.5});

void BM_TriangleCountsSerial(benchmark::State& state) {
  const ColoredGraph g = random_graph(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(serial::block_triangle_counts(g));
}
void BM_TriangleCountsParallel(benchmark::State& state) {
  const ColoredGraph g = random_graph(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(block_triangle_counts(g));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const FinitePartition fp = build_finite_partition(static_cast<int>(state.range(0)), kHalves);
  for (auto _ : state) benchmark::DoNotOptimize(serial::log_partition_enumerate(fp, kTwoBlock));
}
void BM_EnumerateParallel(benchmark::State& state) {
  const FinitePartition fp = build_finite_partition(static_cast<int>(state.range(0)), kHalves);
  for (auto _ : state) benchmark::DoNotOptimize(log_partition_enumerate(fp, kTwoBlock));
}

void BM_CutExhaustiveSerial(benchmark::State& state) {
  const StepKernel d = random_kernel(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(serial::cut_norm_exhaustive(d));
}
void BM_CutExhaustiveParallel(benchmark::State& state) {
  const StepKernel d = random_kernel(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm_exhaustive(d));
}

void BM_SolveSerial(benchmark::State& state) {
  const ModelParams p = ModelParams::constant(static_cast<int>(state.range(0)), 1.5, -0.5);
  const LimitPartition limit = LimitPartition::uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::solve_fixed_point(limit, p, 0.0));
}
void BM_SolveParallel(benchmark::State& state) {
  const ModelParams p = ModelParams::constant(static_cast<int>(state.range(0)), 1.5, -0.5);
  const LimitPartition limit = LimitPartition::uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fixed_point(limit, p, 0.0));
}

ChainConfig chain_config(int n) {
  ChainConfig cfg;
  cfg.n = n;
  cfg.sweeps = 20;
  cfg.burn_in = 10;
  cfg.thin = 1;
  cfg.chains = 4;
  return cfg;
}
void BM_ChainsSerial(benchmark::State& state) {
  const ChainConfig cfg = chain_config(static_cast<int>(state.range(0)));
  const FinitePartition fp = build_finite_partition(cfg.n, kHalves);
  for (auto _ : state) benchmark::DoNotOptimize(serial::run_chains(fp, kTwoBlock, cfg));
}
void BM_ChainsParallel(benchmark::State& state) {
  const ChainConfig cfg = chain_config(static_cast<int>(state.range(0)));
  const FinitePartition fp = build_finite_partition(cfg.n, kHalves);
  for (auto _ : state) benchmark::DoNotOptimize(run_chains(fp, kTwoBlock, cfg));
}

}  // namespace

BENCHMARK(BM_TriangleCountsSerial)->Arg(200)->Arg(800);
BENCHMARK(BM_TriangleCountsParallel)->Arg(200)->Arg(800);
BENCHMARK(BM_EnumerateSerial)->Arg(6)->Arg(7);
BENCHMARK(BM_EnumerateParallel)->Arg(6)->Arg(7);
BENCHMARK(BM_CutExhaustiveSerial)->Arg(10)->Arg(14);
BENCHMARK(BM_CutExhaustiveParallel)->Arg(10)->Arg(14);
BENCHMARK(BM_SolveSerial)->Arg(2)->Arg(6);
BENCHMARK(BM_SolveParallel)->Arg(2)->Arg(6);
BENCHMARK(BM_ChainsSerial)->Arg(100);
BENCHMARK(BM_ChainsParallel)->Arg(100);

BENCHMARK_MAIN();
