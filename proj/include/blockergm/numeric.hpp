#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockergm {

/// Logistic function e^x / (1 + e^x), evaluated without overflow.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// ln(1 + e^x).
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double logit(double u) { return std::log(u) - std::log1p(-u); }

/// Binary entropy density I(u) = u ln u + (1-u) ln(1-u), with I(0) = I(1) = 0.
inline double entropy_density(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return u * std::log(u) + (1.0 - u) * std::log1p(-u);
}

/// Streaming log-sum-exp with a running maximum; optionally tracks a weighted
/// sum sum_x w(x) e^{x - max} alongside the plain one.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double weighted = 0.0;

  void add(double x, double weight = 0.0) {
    if (x > max) {
      const double scale = std::exp(max - x);
      sum = sum * scale + 1.0;
      weighted = weighted * scale + weight;
      max = x;
    } else {
      const double e = std::exp(x - max);
      sum += e;
      weighted += weight * e;
    }
  }

  void merge(const LogSumExp& other) {
    if (other.sum == 0.0) return;
    if (sum == 0.0) {
      *this = other;
      return;
    }
    if (other.max > max) {
      const double scale = std::exp(max - other.max);
      sum = sum * scale + other.sum;
      weighted = weighted * scale + other.weighted;
      max = other.max;
    } else {
      const double scale = std::exp(other.max - max);
      sum += other.sum * scale;
      weighted += other.weighted * scale;
    }
  }

  double log_value() const { return max + std::log(sum); }
  double weighted_mean() const { return weighted / sum; }
};

}  // namespace blockergm
