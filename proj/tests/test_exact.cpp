#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blockergm/errors.hpp"
#include "blockergm/exact.hpp"
#include "blockergm/numeric.hpp"
#include "oracles.hpp"

using namespace blockergm;

namespace {

FinitePartition one_block(int n) { return FinitePartition({n}, LimitPartition::uniform(1)); }

ModelParams zero_alpha(int k, std::vector<double> h) {
  return ModelParams::symmetrized(k, std::vector<double>(static_cast<std::size_t>(k) * k * k, 0.0), std::move(h));
}

}  // namespace

TEST(Enumerate, ThreeVertexClosedForm) {
  for (double h : {-2.0, -1.0, 0.0, 1.0, 2.0, 7.5}) {
    const ExactResult r = log_partition_enumerate(one_block(3), ModelParams::constant(1, 0.0, h));
    const double expected = std::log(1 + 3 * std::exp(h) + 3 * std::exp(2 * h) + std::exp(3 * h));
    EXPECT_NEAR(r.log_z, expected, 1e-12 * std::abs(expected)) << "h=" << h;
    EXPECT_NEAR(r.free_energy_n, r.log_z / 9.0, 1e-15);
    EXPECT_EQ(r.n, 3);
    EXPECT_EQ(r.k, 1);
  }
  EXPECT_NEAR(log_partition_enumerate(one_block(3), ModelParams::constant(1, 0.0, 0.0)).log_z, std::log(8.0), 1e-14);
}

TEST(Enumerate, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = 1 + trial % 3;
    const int n = std::max(k, 4 + trial % 3);
    const FinitePartition fp = build_finite_partition(n, oracle::random_limit(k, rng));
    const ModelParams p = oracle::random_params(k, -4, 4, -2, 2, rng);
    const oracle::BruteForce bf = oracle::brute_force(fp, p);
    const ExactResult fast = log_partition_enumerate(fp, p);
    const ExactResult ref = serial::log_partition_enumerate(fp, p);
    EXPECT_NEAR(fast.log_z, bf.log_z, 1e-12 * std::abs(bf.log_z));
    EXPECT_NEAR(ref.log_z, bf.log_z, 1e-12 * std::abs(bf.log_z));
    EXPECT_NEAR(fast.mean_edge_density, bf.mean_edge_density, 1e-12);
    EXPECT_NEAR(ref.mean_edge_density, bf.mean_edge_density, 1e-12);
    EXPECT_GE(fast.mean_edge_density, 0.0);
    EXPECT_LE(fast.mean_edge_density, 1.0);
    EXPECT_EQ(fast.params_digest, params_digest(p));
  }
}

TEST(Enumerate, SixVertexTwoBlocksMatchesBruteForce) {
  std::mt19937_64 rng(22);
  const FinitePartition fp = build_finite_partition(6, LimitPartition({0.5, 0.5}));
  const ModelParams p = oracle::random_params(2, -3, 3, -1.5, 1.5, rng);
  const oracle::BruteForce bf = oracle::brute_force(fp, p);
  EXPECT_NEAR(log_partition_enumerate(fp, p).log_z, bf.log_z, 1e-12 * std::abs(bf.log_z));
}

TEST(Enumerate, ChunkingIsDeterministic) {
  std::mt19937_64 rng(23);
  const FinitePartition fp = build_finite_partition(7, LimitPartition({0.3, 0.7}));
  const ModelParams p = oracle::random_params(2, 0, 2, -1, 1, rng);
  const ExactResult a = log_partition_enumerate(fp, p);
  const ExactResult b = log_partition_enumerate(fp, p);
  EXPECT_EQ(a.log_z, b.log_z);
  EXPECT_EQ(a.mean_edge_density, b.mean_edge_density);
  EnumerationOptions coarse;
  coarse.prefix_bits = 4;
  EXPECT_NEAR(log_partition_enumerate(fp, p, coarse).log_z, a.log_z, 1e-12 * std::abs(a.log_z));
}

TEST(Enumerate, CapRaisesResourceLimit) {
  try {
    log_partition_enumerate(one_block(9), ModelParams::constant(1, 0, 0));
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError& e) {
    EXPECT_NE(std::string(e.what()).find("28"), std::string::npos);
  }
  EnumerationOptions tight;
  tight.max_edge_slots = 5;
  EXPECT_THROW(log_partition_enumerate(one_block(4), ModelParams::constant(1, 0, 0), tight), ResourceLimitError);
}

TEST(Factorized, ClosedFormExamples) {
  const double h11 = 0.7, h12 = -1.3;
  const FinitePartition fp({2, 1}, LimitPartition({0.6, 0.4}));
  const std::vector<double> h{h11, h12, h12, 0.4};
  const double expected = std::log((1 + std::exp(h12)) * (1 + std::exp(h12)) * (1 + std::exp(h11)));
  EXPECT_NEAR(log_partition_factorized(fp, h), expected, 1e-14);
  const FinitePartition big = build_finite_partition(11, LimitPartition::uniform(3));
  EXPECT_NEAR(log_partition_factorized(big, std::vector<double>(9, 0.0)), 55 * std::log(2.0), 1e-12);
}

TEST(Factorized, AgreesWithEnumeration) {
  std::mt19937_64 rng(24);
  for (int n = 3; n <= 7; ++n)
    for (int k = 1; k <= 3; ++k) {
      if (n < k) continue;
      const FinitePartition fp = build_finite_partition(n, oracle::random_limit(k, rng));
      const ModelParams p = zero_alpha(k, oracle::random_symmetric(k, -3, 3, rng));
      const double closed = log_partition_factorized(fp, p.h_matrix());
      EXPECT_NEAR(log_partition_enumerate(fp, p).log_z, closed, 1e-10 * std::abs(closed));
    }
}

TEST(ScaledCgf, VanishesAtZero) {
  std::mt19937_64 rng(25);
  const FinitePartition fp = build_finite_partition(5, LimitPartition({0.4, 0.6}));
  EXPECT_EQ(scaled_cgf(fp, oracle::random_params(2, -1, 1, -1, 1, rng), 0.0), 0.0);
}

TEST(ScaledCgf, DerivativeIsMeanEdgeDensity) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 4; ++trial) {
    const int k = 1 + trial % 2;
    const FinitePartition fp = build_finite_partition(5 + trial % 2, oracle::random_limit(k, rng));
    const ModelParams p = oracle::random_params(k, 0, 3, -1, 1, rng);
    const double step = 1e-5;
    const double derivative = (scaled_cgf(fp, p, step) - scaled_cgf(fp, p, -step)) / (2 * step);
    EXPECT_NEAR(derivative, log_partition_enumerate(fp, p).mean_edge_density, 1e-6);
  }
}

TEST(ScaledCgf, SingleBlockClosedForm) {
  for (int n : {3, 5, 6}) {
    const double h = 0.35;
    const ModelParams p = ModelParams::constant(1, 0.0, h);
    for (double s : {-1.5, -0.2, 0.9}) {
      const double expected = (n - 1.0) / n * (softplus(h + s) - softplus(h));
      EXPECT_NEAR(scaled_cgf(one_block(n), p, s), expected, 1e-13);
    }
  }
}

TEST(ScaledCgf, CurveMatchesPointwiseAndIsConvex) {
  std::mt19937_64 rng(27);
  const FinitePartition fp = build_finite_partition(5, LimitPartition({0.5, 0.5}));
  const ModelParams p = oracle::random_params(2, 0, 2, -1, 1, rng);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-2.0 + 0.2 * i);
  const std::vector<double> curve = scaled_cgf_curve(fp, p, grid);
  ASSERT_EQ(curve.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); i += 5) EXPECT_NEAR(curve[i], scaled_cgf(fp, p, grid[i]), 1e-13);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    EXPECT_GE(curve[i - 1] + curve[i + 1] - 2 * curve[i], -1e-12) << "at s=" << grid[i];
}

TEST(Properties, ComplementSymmetry) {
  for (int n = 3; n <= 6; ++n)
    for (double h : {-1.7, 0.3, 2.2}) {
      const double pos = log_partition_enumerate(one_block(n), ModelParams::constant(1, 0, h)).log_z;
      const double neg = log_partition_enumerate(one_block(n), ModelParams::constant(1, 0, -h)).log_z;
      EXPECT_NEAR(pos, n * (n - 1) / 2.0 * h + neg, 1e-12 * std::max(1.0, std::abs(pos)));
    }
}

TEST(Properties, FreeEnergyNondecreasingInEveryEdgeWeight) {
  std::mt19937_64 rng(28);
  const int k = 2;
  const FinitePartition fp = build_finite_partition(5, LimitPartition({0.4, 0.6}));
  const ModelParams p = oracle::random_params(k, -1, 2, -1, 1, rng);
  const double base = log_partition_enumerate(fp, p).free_energy_n;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      std::vector<double> h = p.h_matrix();
      h[i * k + j] += 0.1;
      if (i != j) h[j * k + i] += 0.1;
      const ModelParams q = ModelParams::symmetrized(k, p.alpha_tensor(), h);
      EXPECT_GE(log_partition_enumerate(fp, q).free_energy_n, base);
    }
}
