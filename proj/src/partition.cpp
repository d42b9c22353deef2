#include "blockergm/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace blockergm {

LimitPartition::LimitPartition(std::vector<double> weights) : b_(std::move(weights)) {
  if (b_.empty()) throw std::invalid_argument("limit partition needs at least one block");
  double total = 0.0;
  for (double bi : b_) {
    if (!(bi > 0.0) || !std::isfinite(bi))
      throw std::invalid_argument("block weights must be positive and finite");
    total += bi;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("block weights must sum to 1 (got " + std::to_string(total) + ")");
  left_.resize(b_.size() + 1, 0.0);
  std::partial_sum(b_.begin(), b_.end(), left_.begin() + 1);
  left_.back() = 1.0;
}

LimitPartition LimitPartition::uniform(int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  return LimitPartition(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
}

FinitePartition::FinitePartition(std::vector<int> sizes, LimitPartition limit)
    : sizes_(std::move(sizes)), limit_(std::move(limit)) {
  if (static_cast<int>(sizes_.size()) != limit_.k())
    throw std::invalid_argument("finite partition has " + std::to_string(sizes_.size()) +
                                " blocks but the limit partition has " +
                                std::to_string(limit_.k()));
  offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 0) throw std::invalid_argument("block sizes must be nonnegative");
    offsets_[i + 1] = offsets_[i] + sizes_[i];
  }
  n_ = offsets_.back();
  if (n_ < 1) throw std::invalid_argument("finite partition must cover at least one vertex");
  colors_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < k(); ++i) std::fill(colors_.begin() + begin(i), colors_.begin() + end(i), i);
}

double FinitePartition::eta() const {
  double eta = 0.0;
  for (int i = 0; i < k(); ++i)
    eta = std::max(eta, std::abs(static_cast<double>(sizes_[i]) / n_ - limit_.weight(i)));
  return eta;
}

FinitePartition build_finite_partition(int n, const LimitPartition& limit) {
  const int k = limit.k();
  if (n < k)
    throw std::invalid_argument("n = " + std::to_string(n) + " is smaller than k = " +
                                std::to_string(k));
  std::vector<int> w(static_cast<std::size_t>(k));
  std::vector<double> remainder(static_cast<std::size_t>(k));
  int assigned = 0;
  for (int i = 0; i < k; ++i) {
    const double quota = n * limit.weight(i);
    w[i] = static_cast<int>(std::floor(quota));
    remainder[i] = quota - w[i];
    assigned += w[i];
  }
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int r = 0; r < n - assigned; ++r) ++w[order[r % k]];

  // Empty blocks borrow a vertex from the most over-allocated block with room to spare.
  for (int i = 0; i < k; ++i) {
    if (w[i] > 0) continue;
    int donor = -1;
    double best_surplus = -1e300;
    for (int j = 0; j < k; ++j) {
      if (w[j] < 2) continue;
      const double surplus = w[j] - n * limit.weight(j);
      if (surplus > best_surplus) {
        best_surplus = surplus;
        donor = j;
      }
    }
    --w[donor];
    ++w[i];
  }
  return FinitePartition(std::move(w), limit);
}

}  // namespace blockergm
