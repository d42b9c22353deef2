#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockergm/partition.hpp"

namespace blockergm {

/// Simple undirected graph on {0, ..., n-1} with a vertex coloring, stored as
/// packed adjacency bit rows.
class ColoredGraph {
 public:
  explicit ColoredGraph(FinitePartition partition);

  int n() const { return n_; }
  int k() const { return partition_.k(); }
  const FinitePartition& partition() const { return partition_; }
  int color_of(int v) const { return partition_.color_of(v); }

  bool has_edge(int u, int v) const {
    return (rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1U;
  }
  /// Throws std::invalid_argument on a loop or out-of-range vertex.
  void set_edge(int u, int v, bool present);

  std::int64_t edge_count() const;
  int degree(int u) const;

  /// Number of w in [lo, hi) adjacent to both u and v.
  int common_neighbors(int u, int v, int lo, int hi) const;

  int words_per_row() const { return words_; }
  std::span<const std::uint64_t> row(int u) const {
    return {rows_.data() + static_cast<std::size_t>(u) * words_, static_cast<std::size_t>(words_)};
  }

  bool operator==(const ColoredGraph& other) const {
    return partition_ == other.partition_ && rows_ == other.rows_;
  }

 private:
  int n_;
  int words_;
  FinitePartition partition_;
  std::vector<std::uint64_t> rows_;
};

}  // namespace blockergm
