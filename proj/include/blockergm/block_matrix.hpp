#pragma once

#include <vector>

namespace blockergm {

/// Symmetric k x k matrix with entries in [0,1]: the variable of the scalar problem.
class BlockMatrix {
 public:
  /// Throws std::invalid_argument unless c has k^2 entries, is symmetric within 1e-12
  /// and every entry lies in [0,1]. Symmetric partners are averaged.
  BlockMatrix(int k, std::vector<double> c);

  static BlockMatrix constant(int k, double value);

  int k() const { return k_; }
  double operator()(int i, int j) const { return c_[static_cast<std::size_t>(i) * k_ + j]; }
  const std::vector<double>& values() const { return c_; }

  /// max_{ij} |a_ij - b_ij|.
  friend double sup_distance(const BlockMatrix& a, const BlockMatrix& b);

  bool operator==(const BlockMatrix& other) const { return k_ == other.k_ && c_ == other.c_; }

 private:
  int k_;
  std::vector<double> c_;
};

double sup_distance(const BlockMatrix& a, const BlockMatrix& b);

}  // namespace blockergm
