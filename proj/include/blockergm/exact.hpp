#pragma once

#include <span>
#include <string>
#include <vector>

#include "blockergm/params.hpp"
#include "blockergm/partition.hpp"

namespace blockergm {

struct ExactResult {
  double log_z = 0.0;
  double free_energy_n = 0.0;      // log_z / n^2
  double mean_edge_density = 0.0;  // Gibbs expectation of 2 E_n / n^2
  int n = 0;
  int k = 0;
  std::string params_digest;
};

struct EnumerationOptions {
  /// Largest admissible n(n-1)/2; the default keeps n <= 8.
  int max_edge_slots = 28;
  /// The configuration space is split into 2^prefix_bits chunks by fixing the
  /// highest-indexed edge variables. The split does not depend on the thread count.
  int prefix_bits = 10;
};

/// Exact log Z by log-sum-exp over all 2^{n(n-1)/2} graphs, walking each chunk in
/// Gray-code order so every step toggles one edge. Chunks run in parallel.
/// Throws ResourceLimitError when n(n-1)/2 exceeds opts.max_edge_slots.
ExactResult log_partition_enumerate(const FinitePartition& partition, const ModelParams& params,
                                    const EnumerationOptions& opts = {});

/// Closed-form log Z at alpha = 0:
/// sum_{i<j} w_i w_j ln(1 + e^{h_ij}) + sum_i C(w_i, 2) ln(1 + e^{h_ii}).
double log_partition_factorized(const FinitePartition& partition, std::span<const double> h);

/// c_n(s) = 2 (f_n(h + s) - f_n(h)), every h_ij shifted by s.
double scaled_cgf(const FinitePartition& partition, const ModelParams& params, double s,
                  const EnumerationOptions& opts = {});

/// c_n on a grid of s values, sharing the unshifted enumeration.
std::vector<double> scaled_cgf_curve(const FinitePartition& partition, const ModelParams& params,
                                     std::span<const double> s_values,
                                     const EnumerationOptions& opts = {});

namespace serial {
/// Single Gray-code pass over the whole configuration space, no chunking.
ExactResult log_partition_enumerate(const FinitePartition& partition, const ModelParams& params,
                                    const EnumerationOptions& opts = {});
}  // namespace serial

}  // namespace blockergm
