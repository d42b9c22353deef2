#include "blockergm/block_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blockergm {

BlockMatrix::BlockMatrix(int k, std::vector<double> c) : k_(k), c_(std::move(c)) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (c_.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("block matrix needs k^2 entries");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double x = c_[i * k + j];
      if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("block matrix entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") = " + std::to_string(x) +
                                    " lies outside [0,1]");
      if (j > i) {
        const double y = c_[j * k + i];
        if (std::abs(x - y) > 1e-12) throw std::invalid_argument("block matrix is not symmetric");
        c_[i * k + j] = c_[j * k + i] = 0.5 * (x + y);
      }
    }
}

BlockMatrix BlockMatrix::constant(int k, double value) {
  return BlockMatrix(k, std::vector<double>(static_cast<std::size_t>(k) * k, value));
}

double sup_distance(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.k_ != b.k_) throw std::invalid_argument("block matrices differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.c_.size(); ++i) d = std::max(d, std::abs(a.c_[i] - b.c_[i]));
  return d;
}

}  // namespace blockergm
