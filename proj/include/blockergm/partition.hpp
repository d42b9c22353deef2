#pragma once

#include <vector>

namespace blockergm {

/// Limiting coloring of [0,1]: block i occupies [a_i, a_i + b_i).
class LimitPartition {
 public:
  /// Throws std::invalid_argument unless every b_i > 0 and sum b_i = 1 within 1e-12.
  explicit LimitPartition(std::vector<double> weights);

  static LimitPartition uniform(int k);

  int k() const { return static_cast<int>(b_.size()); }
  double weight(int i) const { return b_[i]; }
  const std::vector<double>& weights() const { return b_; }
  double left(int i) const { return left_[i]; }
  double right(int i) const { return left_[i + 1]; }
  /// Breakpoints 0 = a_0 < a_1 < ... < a_k = 1.
  const std::vector<double>& boundaries() const { return left_; }

  bool operator==(const LimitPartition& other) const { return b_ == other.b_; }

 private:
  std::vector<double> b_;
  std::vector<double> left_;
};

/// Partition of the vertex set {0, ..., n-1} into k consecutive intervals.
class FinitePartition {
 public:
  /// Sizes must be nonnegative, sum to n >= 1 and match limit.k().
  FinitePartition(std::vector<int> sizes, LimitPartition limit);

  int n() const { return n_; }
  int k() const { return static_cast<int>(sizes_.size()); }
  int size(int i) const { return sizes_[i]; }
  const std::vector<int>& sizes() const { return sizes_; }
  int begin(int i) const { return offsets_[i]; }
  int end(int i) const { return offsets_[i + 1]; }
  int color_of(int v) const { return colors_[v]; }
  const std::vector<int>& colors() const { return colors_; }
  const LimitPartition& limit() const { return limit_; }

  /// max_i |w_i/n - b_i|.
  double eta() const;

  bool operator==(const FinitePartition& other) const {
    return sizes_ == other.sizes_ && limit_ == other.limit_;
  }

 private:
  int n_ = 0;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<int> colors_;
  LimitPartition limit_;
};

/// Largest-remainder apportionment of n * b_i (ties to the smaller index).
/// Every block receives at least one vertex; throws std::invalid_argument if n < k.
FinitePartition build_finite_partition(int n, const LimitPartition& limit);

}  // namespace blockergm
