#include "blockergm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "blockergm/numeric.hpp"

namespace blockergm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<ChainTrace> chains_impl(const FinitePartition& partition, const ModelParams& params,
                                    const ChainConfig& cfg, bool parallel) {
  cfg.validate();
  std::vector<ChainTrace> traces(static_cast<std::size_t>(cfg.chains));
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cfg.chains; ++c) traces[c] = run_chain(partition, params, cfg, c);
  } else {
    for (int c = 0; c < cfg.chains; ++c) traces[c] = run_chain(partition, params, cfg, c);
  }
  return traces;
}

}  // namespace

void ChainConfig::validate() const {
  if (n < 1) throw std::invalid_argument("chain needs n >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be nonnegative");
  if (sweeps <= burn_in) throw std::invalid_argument("sweeps must exceed burn_in");
  if (thin < 1) throw std::invalid_argument("thin must be at least 1");
  if (chains < 1) throw std::invalid_argument("chains must be at least 1");
}

double conditional_flip_energy(const ColoredGraph& g, const ModelParams& params, int u, int v) {
  if (u == v) throw std::invalid_argument("flip energy needs distinct vertices");
  if (u < 0 || v < 0 || u >= g.n() || v >= g.n()) throw std::invalid_argument("vertex out of range");
  if (params.k() != g.k()) throw std::invalid_argument("graph and parameters disagree on k");
  const int cu = g.color_of(u);
  const int cv = g.color_of(v);
  const FinitePartition& p = g.partition();
  double wedges = 0.0;
  for (int l = 0; l < g.k(); ++l) {
    const double a = params.alpha(cu, cv, l);
    if (a == 0.0) continue;
    wedges += a * g.common_neighbors(u, v, p.begin(l), p.end(l));
  }
  return params.h(cu, cv) + wedges / g.n();
}

std::uint64_t chain_seed(std::uint64_t seed, int index) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(index) * 0xd1b54a32d192ed03ULL);
}

GlauberChain::GlauberChain(const FinitePartition& partition, const ModelParams& params,
                           std::uint64_t seed)
    : params_(params), graph_(partition), rng_(seed) {
  if (params.k() != partition.k()) throw std::invalid_argument("partition and parameters disagree on k");
  const int n = partition.n();
  pairs_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      pairs_.emplace_back(u, v);
      if (unit(rng_) < logistic(params_.h(partition.color_of(u), partition.color_of(v)))) {
        graph_.set_edge(u, v, true);
        ++edges_;
      }
    }
}

void GlauberChain::update(int u, int v) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool present = unit(rng_) < logistic(conditional_flip_energy(graph_, params_, u, v));
  const bool was = graph_.has_edge(u, v);
  if (present != was) {
    graph_.set_edge(u, v, present);
    edges_ += present ? 1 : -1;
  }
}

void GlauberChain::sweep() {
  std::shuffle(pairs_.begin(), pairs_.end(), rng_);
  for (const auto& [u, v] : pairs_) update(u, v);
}

double GlauberChain::edge_density() const {
  const double n = graph_.n();
  return 2.0 * static_cast<double>(edges_) / (n * n);
}

double ChainTrace::mean() const {
  if (edge_density.empty()) return 0.0;
  return std::accumulate(edge_density.begin(), edge_density.end(), 0.0) /
         static_cast<double>(edge_density.size());
}

ChainTrace run_chain(const FinitePartition& partition, const ModelParams& params,
                     const ChainConfig& cfg, int index) {
  cfg.validate();
  if (cfg.n != partition.n()) throw std::invalid_argument("chain n differs from the partition size");
  ChainTrace trace;
  trace.chain = index;
  trace.seed = chain_seed(cfg.seed, index);
  GlauberChain chain(partition, params, trace.seed);
  for (int t = 1; t <= cfg.sweeps; ++t) {
    chain.sweep();
    if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) {
      trace.sweep.push_back(t);
      trace.edge_density.push_back(chain.edge_density());
    }
  }
  return trace;
}

std::vector<ChainTrace> run_chains(const FinitePartition& partition, const ModelParams& params,
                                   const ChainConfig& cfg) {
  return chains_impl(partition, params, cfg, true);
}

namespace serial {
std::vector<ChainTrace> run_chains(const FinitePartition& partition, const ModelParams& params,
                                   const ChainConfig& cfg) {
  return chains_impl(partition, params, cfg, false);
}
}  // namespace serial

LLNReport lln_experiment(const LimitPartition& limit, const ModelParams& params, int n,
                         const ChainConfig& cfg, const SolverOptions& solver) {
  ChainConfig run = cfg;
  run.n = n;
  run.validate();
  LLNReport report;
  report.n = n;
  report.seed = cfg.seed;
  report.regime = classify_regime(params);
  report.out_of_regime = report.regime != Regime::Contractive;
  report.solve = solve_fixed_point(limit, params, 0.0, solver);
  report.predicted = predicted_edge_density(limit, report.solve.c_star);

  const FinitePartition partition = build_finite_partition(n, limit);
  report.traces = run_chains(partition, params, run);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& t : report.traces) {
    report.per_chain_means.push_back(t.mean());
    for (double x : t.edge_density) {
      sum += x;
      sum_sq += x * x;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("chain configuration retains no samples");
  report.empirical_mean = sum / static_cast<double>(count);
  const double var = std::max(0.0, sum_sq / count - report.empirical_mean * report.empirical_mean);
  report.empirical_sd = std::sqrt(var * count / std::max<std::size_t>(count - 1, 1));
  const std::size_t chains = report.per_chain_means.size();
  if (chains > 1) {
    const double m = std::accumulate(report.per_chain_means.begin(), report.per_chain_means.end(), 0.0) / chains;
    double ss = 0.0;
    for (double x : report.per_chain_means) ss += (x - m) * (x - m);
    report.standard_error = std::sqrt(ss / (chains - 1) / chains);
  }
  report.abs_gap = std::abs(report.empirical_mean - report.predicted);
  return report;
}

}  // namespace blockergm
