#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockergm/params.hpp"
#include "blockergm/partition.hpp"

namespace blockergm {

struct ExactSection {
  int n = 0;
  int max_edge_slots = 28;
  /// Optional shifts at which the scaled CGF is tabulated.
  std::vector<double> cgf_s;
  bool operator==(const ExactSection&) const = default;
};

struct SolveSection {
  double s = 0.0;
  double tol = 1e-12;
  int max_iter = 100000;
  int starts = 13;
  std::optional<double> damping;
  std::optional<std::uint64_t> seed;
  bool operator==(const SolveSection&) const = default;
};

struct SampleSection {
  int n = 0;
  int sweeps = 5000;
  int burn_in = 1000;
  int thin = 10;
  int chains = 4;
  std::optional<std::uint64_t> seed;
  bool operator==(const SampleSection&) const = default;
};

struct SweepSection {
  /// "s", "h.i.j" or "alpha.i.j.l" with 1-based colors.
  std::string parameter = "s";
  std::vector<double> grid;
  bool operator==(const SweepSection&) const = default;
};

struct DistanceSection {
  /// Graphon JSON files (.json) or edge-list files (anything else).
  std::string a;
  std::string b;
  /// Side length of the rendered value grids; 0 disables rendering.
  int render_grid = 0;
  bool operator==(const DistanceSection&) const = default;
};

struct CertifySection {
  /// Vertex count for the enumeration and graph checks.
  int n = 5;
  /// Random instances per check.
  int trials = 20;
  std::optional<std::uint64_t> seed;
  bool operator==(const CertifySection&) const = default;
};

struct ExperimentConfig {
  LimitPartition limit = LimitPartition::uniform(1);
  ModelParams params = ModelParams::constant(1, 0.0, 0.0);
  std::uint64_t seed = 1;
  std::optional<ExactSection> exact;
  std::optional<SolveSection> solve;
  std::optional<SampleSection> sample;
  std::optional<SweepSection> sweep;
  std::optional<DistanceSection> distance;
  std::optional<CertifySection> certify;

  /// Section seed if given, otherwise the top-level seed.
  std::uint64_t solve_seed() const;
  std::uint64_t sample_seed() const;
  std::uint64_t certify_seed() const;
  /// Replaces the top-level seed and drops every section seed.
  void override_seed(std::uint64_t value);

  bool operator==(const ExperimentConfig& other) const;
};

/// Parses and validates a JSON configuration. Unknown keys, wrong types, malformed
/// values and invalid models raise ConfigError naming the offending key path.
///
/// model.alpha accepts a scalar, a flat k^3 list, a nested k x k x k list, the
/// C(k+2,3) entries with i <= j <= l in lexicographic order, or a sparse object
/// {"i,j,l": value} (1-based; each key sets every permutation). model.h accepts the
/// analogous forms with k^2, k x k, k(k+1)/2 entries or {"i,j": value}.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON with dense alpha and h; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// 16 hex digits identifying the canonical serialization.
std::string config_digest(const ExperimentConfig& cfg);

}  // namespace blockergm
