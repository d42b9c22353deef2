#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "blockergm/colored_graph.hpp"
#include "blockergm/params.hpp"
#include "blockergm/partition.hpp"
#include "blockergm/variational.hpp"

namespace blockergm {

struct ChainConfig {
  int n = 0;
  /// Total sweeps per chain, burn-in included.
  int sweeps = 5000;
  int burn_in = 1000;
  /// Sweeps between retained samples after burn-in.
  int thin = 10;
  std::uint64_t seed = 1;
  int chains = 4;

  /// Throws std::invalid_argument unless sweeps > burn_in >= 0, thin >= 1, chains >= 1.
  void validate() const;
};

/// Hamiltonian change from setting the edge uv present versus absent, everything else fixed:
/// h_{c(u)c(v)} + (1/n) sum_w alpha_{c(u)c(v)c(w)} X_uw X_vw.
double conditional_flip_energy(const ColoredGraph& g, const ModelParams& params, int u, int v);

/// Independent RNG seed for chain `index` derived from the base seed.
std::uint64_t chain_seed(std::uint64_t seed, int index);

/// Single-edge heat-bath dynamics. The initial graph has independent edges with
/// probability logistic(h_{c(u)c(v)}).
class GlauberChain {
 public:
  GlauberChain(const FinitePartition& partition, const ModelParams& params, std::uint64_t seed);

  /// One update per vertex pair, in a freshly shuffled order.
  void sweep();
  /// Heat-bath update of a single pair.
  void update(int u, int v);

  const ColoredGraph& graph() const { return graph_; }
  std::int64_t edge_count() const { return edges_; }
  /// 2 E_n / n^2.
  double edge_density() const;

 private:
  ModelParams params_;
  ColoredGraph graph_;
  std::mt19937_64 rng_;
  std::vector<std::pair<int, int>> pairs_;
  std::int64_t edges_ = 0;
};

struct ChainTrace {
  int chain = 0;
  std::uint64_t seed = 0;
  std::vector<int> sweep;
  std::vector<double> edge_density;

  double mean() const;
};

/// Runs chain `index` for cfg.sweeps sweeps on cfg.n vertices colored by `partition` and
/// records the edge density after burn-in every cfg.thin sweeps.
ChainTrace run_chain(const FinitePartition& partition, const ModelParams& params,
                     const ChainConfig& cfg, int index = 0);

/// cfg.chains independent chains, run in parallel.
std::vector<ChainTrace> run_chains(const FinitePartition& partition, const ModelParams& params,
                                   const ChainConfig& cfg);

struct LLNReport {
  int n = 0;
  double empirical_mean = 0.0;
  double empirical_sd = 0.0;
  /// Standard deviation of the chain means over sqrt(chains); 0 with one chain.
  double standard_error = 0.0;
  double predicted = 0.0;
  double abs_gap = 0.0;
  std::vector<double> per_chain_means;
  std::uint64_t seed = 0;
  /// Set when alpha is negative somewhere or ||alpha||_inf >= 2.
  bool out_of_regime = false;
  Regime regime = Regime::Heuristic;
  SolveReport solve;
  std::vector<ChainTrace> traces;
};

/// Samples n-vertex graphs and compares the mean edge density with the solver prediction.
/// Propagates NonConvergenceError from the solver.
LLNReport lln_experiment(const LimitPartition& limit, const ModelParams& params, int n,
                         const ChainConfig& cfg, const SolverOptions& solver = {});

namespace serial {
std::vector<ChainTrace> run_chains(const FinitePartition& partition, const ModelParams& params,
                                   const ChainConfig& cfg);
}  // namespace serial

}  // namespace blockergm
