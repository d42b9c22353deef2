#pragma once

#include <string>
#include <vector>

namespace blockergm {

/// Triangle tensor alpha (k x k x k) and edge matrix h (k x k), both fully symmetric.
class ModelParams {
 public:
  ModelParams() = default;

  /// Symmetrizes arbitrary input by averaging over index permutations. Sizes must be
  /// k^3 and k^2 (row-major); the largest entrywise correction is kept in
  /// asymmetry_corrected().
  static ModelParams symmetrized(int k, std::vector<double> alpha, std::vector<double> h);
  static ModelParams constant(int k, double alpha, double h);

  int k() const { return k_; }
  double alpha(int i, int j, int l) const { return alpha_[(i * k_ + j) * k_ + l]; }
  double h(int i, int j) const { return h_[i * k_ + j]; }
  const std::vector<double>& alpha_tensor() const { return alpha_; }
  const std::vector<double>& h_matrix() const { return h_; }

  double alpha_inf() const;
  double h_inf() const;
  bool alpha_nonnegative() const;
  double asymmetry_corrected() const { return asymmetry_; }

  /// Same model with every h_ij shifted by s.
  ModelParams shifted(double s) const;
  /// Relabels colors: the new color i is the old color perm[i].
  ModelParams permuted(const std::vector<int>& perm) const;

  bool operator==(const ModelParams& other) const {
    return k_ == other.k_ && alpha_ == other.alpha_ && h_ == other.h_;
  }

 private:
  int k_ = 0;
  std::vector<double> alpha_;
  std::vector<double> h_;
  double asymmetry_ = 0.0;
};

/// Hex FNV-1a digest of k, alpha and h (bit patterns).
std::string params_digest(const ModelParams& params);

}  // namespace blockergm
