#include "blockergm/params.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace blockergm {

ModelParams ModelParams::symmetrized(int k, std::vector<double> alpha, std::vector<double> h) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const auto kk = static_cast<std::size_t>(k);
  if (alpha.size() != kk * kk * kk)
    throw std::invalid_argument("alpha must have k^3 entries");
  if (h.size() != kk * kk) throw std::invalid_argument("h must have k^2 entries");
  for (double x : alpha)
    if (!std::isfinite(x)) throw std::invalid_argument("alpha entries must be finite");
  for (double x : h)
    if (!std::isfinite(x)) throw std::invalid_argument("h entries must be finite");

  ModelParams p;
  p.k_ = k;
  p.alpha_.assign(alpha.size(), 0.0);
  p.h_.assign(h.size(), 0.0);
  auto a = [&](int i, int j, int l) { return alpha[(static_cast<std::size_t>(i) * k + j) * k + l]; };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        // Canonical index order keeps every permutation of (i, j, l) bit-identical.
        std::array<int, 3> c{i, j, l};
        std::sort(c.begin(), c.end());
        const std::array<double, 6> perms{a(c[0], c[1], c[2]), a(c[0], c[2], c[1]), a(c[1], c[0], c[2]),
                                          a(c[1], c[2], c[0]), a(c[2], c[0], c[1]), a(c[2], c[1], c[0])};
        const bool uniform = std::all_of(perms.begin(), perms.end(), [&](double x) { return x == perms[0]; });
        double mean = perms[0];
        if (!uniform) {
          mean = 0.0;
          for (double x : perms) mean += x;
          mean /= 6.0;
        }
        const std::size_t idx = (static_cast<std::size_t>(i) * k + j) * k + l;
        p.asymmetry_ = std::max(p.asymmetry_, std::abs(alpha[idx] - mean));
        p.alpha_[idx] = mean;
      }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double mean = 0.5 * (h[i * kk + j] + h[j * kk + i]);
      p.asymmetry_ = std::max(p.asymmetry_, std::abs(h[i * kk + j] - mean));
      p.h_[i * kk + j] = mean;
    }
  return p;
}

ModelParams ModelParams::constant(int k, double alpha, double h) {
  const auto kk = static_cast<std::size_t>(k);
  return symmetrized(k, std::vector<double>(kk * kk * kk, alpha), std::vector<double>(kk * kk, h));
}

double ModelParams::alpha_inf() const {
  double m = 0.0;
  for (double x : alpha_) m = std::max(m, std::abs(x));
  return m;
}

double ModelParams::h_inf() const {
  double m = 0.0;
  for (double x : h_) m = std::max(m, std::abs(x));
  return m;
}

bool ModelParams::alpha_nonnegative() const {
  return std::all_of(alpha_.begin(), alpha_.end(), [](double x) { return x >= 0.0; });
}

ModelParams ModelParams::shifted(double s) const {
  ModelParams p = *this;
  for (double& x : p.h_) x += s;
  return p;
}

ModelParams ModelParams::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != k_) throw std::invalid_argument("permutation size mismatch");
  ModelParams p = *this;
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) {
      p.h_[i * k_ + j] = h(perm[i], perm[j]);
      for (int l = 0; l < k_; ++l) p.alpha_[(i * k_ + j) * k_ + l] = alpha(perm[i], perm[j], perm[l]);
    }
  return p;
}

namespace {
std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    hash ^= (word >> (8 * byte)) & 0xffU;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}
}  // namespace

std::string params_digest(const ModelParams& params) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  hash = fnv1a(hash, static_cast<std::uint64_t>(params.k()));
  for (double x : params.alpha_tensor()) hash = fnv1a(hash, std::bit_cast<std::uint64_t>(x));
  for (double x : params.h_matrix()) hash = fnv1a(hash, std::bit_cast<std::uint64_t>(x));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace blockergm
