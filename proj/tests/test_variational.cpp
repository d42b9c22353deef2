#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "blockergm/errors.hpp"
#include "blockergm/graphon.hpp"
#include "blockergm/numeric.hpp"
#include "blockergm/variational.hpp"
#include "oracles.hpp"

using namespace blockergm;

namespace {

ModelParams zero_alpha(int k, std::vector<double> h) {
  return ModelParams::symmetrized(k, std::vector<double>(static_cast<std::size_t>(k) * k * k, 0.0), std::move(h));
}

BlockMatrix interior_matrix(int k, std::mt19937_64& rng) { return oracle::random_block_matrix(k, rng, 0.05, 0.95); }

}  // namespace

TEST(BlockMatrix, Validation) {
  EXPECT_THROW(BlockMatrix(2, {0.1, 0.2, 0.3, 0.4}), std::invalid_argument);
  EXPECT_THROW(BlockMatrix(1, {1.5}), std::invalid_argument);
  EXPECT_THROW(BlockMatrix(1, {-0.1}), std::invalid_argument);
  EXPECT_THROW(BlockMatrix(2, {0.1, 0.2}), std::invalid_argument);
  EXPECT_NO_THROW(BlockMatrix(2, {0.1, 0.2, 0.2, 1.0}));
}

TEST(Objective, Examples) {
  const LimitPartition one = LimitPartition::uniform(1);
  EXPECT_NEAR(objective(one, ModelParams::constant(1, 0, 0), BlockMatrix::constant(1, 0.5), 0.0),
              0.5 * std::log(2.0), 1e-15);
  std::mt19937_64 rng(31);
  for (int k = 1; k <= 4; ++k) {
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, -2, 2, -2, 2, rng);
    EXPECT_EQ(objective(limit, p, BlockMatrix::constant(k, 0.0), 0.7), 0.0);
  }
}

TEST(Objective, MatchesGraphonFunctionals) {
  std::mt19937_64 rng(32);
  const LimitPartition limit({0.5, 0.5});
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = oracle::random_params(2, -2, 2, -2, 2, rng);
    const BlockMatrix c = oracle::random_block_matrix(2, rng);
    const StepGraphon g = block_graphon(limit, c);
    const double expected = interaction_functional(limit, p, g) - 0.5 * entropy_functional(g);
    EXPECT_NEAR(objective(limit, p, c, 0.0), expected, 1e-12);
  }
}

TEST(FixedPointMap, Examples) {
  std::mt19937_64 rng(33);
  const LimitPartition limit({0.3, 0.7});
  const ModelParams p = zero_alpha(2, {0.4, -1.0, -1.0, 2.0});
  for (int trial = 0; trial < 5; ++trial) {
    const BlockMatrix out = fixed_point_map(limit, p, oracle::random_block_matrix(2, rng), 0.25);
    EXPECT_DOUBLE_EQ(out(0, 0), logistic(0.65));
    EXPECT_DOUBLE_EQ(out(0, 1), logistic(-0.75));
    EXPECT_DOUBLE_EQ(out(1, 1), logistic(2.25));
  }
  const BlockMatrix one = fixed_point_map(LimitPartition::uniform(1), ModelParams::constant(1, 1, 0),
                                          BlockMatrix::constant(1, 1.0), 0.0);
  EXPECT_NEAR(one(0, 0), 0.7310585786300049, 1e-15);
}

TEST(FixedPointMap, SymmetricInteriorAndMonotone) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, 0, 3, -2, 2, rng);
    const BlockMatrix lo = oracle::random_block_matrix(k, rng);
    std::vector<double> up = lo.values();
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) up[i * k + j] = up[j * k + i] = up[i * k + j] + (1 - up[i * k + j]) * bump(rng);
    const BlockMatrix hi(k, up);
    const BlockMatrix a = fixed_point_map(limit, p, lo, 0.0), b = fixed_point_map(limit, p, hi, 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        EXPECT_EQ(a(i, j), a(j, i));
        EXPECT_GT(a(i, j), 0.0);
        EXPECT_LT(a(i, j), 1.0);
        EXPECT_LE(a(i, j), b(i, j));
      }
  }
}

TEST(Lipschitz, Examples) {
  EXPECT_EQ(lipschitz_bound(ModelParams::constant(3, 0, 1)), 0.0);
  EXPECT_DOUBLE_EQ(lipschitz_bound(ModelParams::constant(2, 1.9, 0)), 0.95);
  std::vector<double> alpha(8, 0.5);
  alpha[0] = -1.5;
  EXPECT_DOUBLE_EQ(lipschitz_bound(ModelParams::symmetrized(2, alpha, std::vector<double>(4, 0.0))), 0.75);
}

TEST(Lipschitz, BoundsTheMapOnRandomPairs) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, -3, 3, -2, 2, rng);
    const BlockMatrix a = oracle::random_block_matrix(k, rng), b = oracle::random_block_matrix(k, rng);
    const double lhs = sup_distance(fixed_point_map(limit, p, a, 0.0), fixed_point_map(limit, p, b, 0.0));
    EXPECT_LE(lhs, lipschitz_bound(p) * sup_distance(a, b) + 1e-15);
  }
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(ModelParams::constant(2, 1.9, 0)), Regime::Contractive);
  EXPECT_EQ(classify_regime(ModelParams::constant(2, 2.0, 0)), Regime::Ferromagnetic);
  EXPECT_EQ(classify_regime(ModelParams::constant(2, -0.1, 0)), Regime::Heuristic);
  EXPECT_EQ(to_string(Regime::Contractive), "contractive");
}

TEST(Solve, ZeroAlphaIsLogisticOfEdgeWeights) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = zero_alpha(k, oracle::random_symmetric(k, -4, 4, rng));
    const SolveReport r = solve_fixed_point(limit, p, 0.0);
    double expected = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        EXPECT_NEAR(r.c_star(i, j), logistic(p.h(i, j)), 1e-12);
        expected += 0.5 * limit.weight(i) * limit.weight(j) * softplus(p.h(i, j));
      }
    EXPECT_NEAR(r.free_energy, expected, 1e-10);
    EXPECT_EQ(r.regime, Regime::Contractive);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.el_residual, 1e-12);
  }
}

TEST(Solve, SingleBlockBisectionOracle) {
  const double u = oracle::bisect([](double x) { return x - logistic(x * x); }, 0.5, 1.0);
  const SolveReport r = solve_fixed_point(LimitPartition::uniform(1), ModelParams::constant(1, 1.0, 0.0), 0.0);
  EXPECT_NEAR(r.c_star(0, 0), u, 1e-11);
  const SolveReport half = solve_fixed_point(LimitPartition::uniform(1), ModelParams::constant(1, 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(half.c_star(0, 0), 0.5);
  EXPECT_NEAR(half.free_energy, 0.5 * std::log(2.0), 1e-15);
}

TEST(Solve, NonConvergenceCarriesBestResidual) {
  SolverOptions opts;
  opts.max_iter = 0;
  try {
    solve_fixed_point(LimitPartition::uniform(2), ModelParams::constant(2, 1.0, 0.3), 0.0, opts);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_GT(e.best_residual(), 0.0);
  }
}

TEST(Solve, SerialReferenceAgrees) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, -1, 3, -2, 2, rng);
    const SolveReport a = solve_fixed_point(limit, p, 0.1);
    const SolveReport b = serial::solve_fixed_point(limit, p, 0.1);
    EXPECT_EQ(a.c_star, b.c_star);
    EXPECT_EQ(a.free_energy, b.free_energy);
    EXPECT_EQ(a.starts_agreed, b.starts_agreed);
  }
}

TEST(ElResidual, Examples) {
  std::mt19937_64 rng(38);
  const LimitPartition limit({0.25, 0.75});
  const ModelParams p = zero_alpha(2, {0.3, -2.0, -2.0, 1.1});
  const BlockMatrix sig(2, {logistic(0.3), logistic(-2.0), logistic(-2.0), logistic(1.1)});
  EXPECT_LE(el_residual(limit, p, sig, 0.0), 1e-16);
  EXPECT_THROW(el_residual(limit, p, BlockMatrix(2, {0.0, 0.5, 0.5, 0.5}), 0.0), std::invalid_argument);
  EXPECT_THROW(el_residual(limit, p, BlockMatrix(2, {0.5, 1.0, 1.0, 0.5}), 0.0), std::invalid_argument);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const LimitPartition lim = oracle::random_limit(k, rng);
    const ModelParams q = oracle::random_params(k, 0, 1.8, -1, 1, rng);
    SolverOptions opts;
    const SolveReport r = solve_fixed_point(lim, q, 0.0, opts);
    EXPECT_LE(el_residual(lim, q, r.c_star, 0.0), opts.tol);
    std::vector<double> moved = r.c_star.values();
    const int i = trial % k;
    const double shift = moved[i * k + i] > 0.5 ? -0.1 : 0.1;
    moved[i * k + i] += shift;
    EXPECT_GE(el_residual(lim, q, BlockMatrix(k, moved), 0.0), 0.1 * (1 - lipschitz_bound(q)) - 1e-12);
  }
}

TEST(PredictedDensity, Examples) {
  EXPECT_DOUBLE_EQ(predicted_edge_density(LimitPartition::uniform(1), BlockMatrix::constant(1, 0.5)), 0.5);
  EXPECT_NEAR(predicted_edge_density(LimitPartition({0.5, 0.5}), BlockMatrix(2, {0.2, 0.4, 0.4, 0.8})), 0.45, 1e-15);
  const LimitPartition limit({0.2, 0.8});
  const ModelParams p = zero_alpha(2, {1.0, -0.5, -0.5, 0.2});
  const SolveReport r = solve_fixed_point(limit, p, 0.0);
  double expected = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expected += limit.weight(i) * limit.weight(j) * logistic(p.h(i, j));
  EXPECT_NEAR(predicted_edge_density(limit, r.c_star), expected, 1e-12);
}

TEST(Holder, Examples) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, 0, 3, -1, 1, rng);
    const HolderCertificate block = holder_certificate(limit, p, block_graphon(limit, oracle::random_block_matrix(k, rng)));
    EXPECT_LE(std::abs(block.gap), 1e-9);
    const HolderCertificate step = holder_certificate(limit, p, oracle::random_step_graphon(limit, 4, rng));
    EXPECT_GE(step.gap, -1e-12);
  }
  const double prob = 0.37, a = 1.6;
  const HolderCertificate flat = holder_certificate(LimitPartition::uniform(1), ModelParams::constant(1, a, 0),
                                                   block_graphon(LimitPartition::uniform(1), BlockMatrix::constant(1, prob)));
  EXPECT_NEAR(flat.left, a * prob * prob * prob, 1e-15);
  EXPECT_NEAR(flat.right, a * prob * prob * prob, 1e-15);
  EXPECT_THROW(holder_certificate(LimitPartition::uniform(1), ModelParams::constant(1, -1, 0),
                                  block_graphon(LimitPartition::uniform(1), BlockMatrix::constant(1, prob))),
               std::invalid_argument);
}

TEST(Properties, ContractionRateAndUniqueness) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, 0, 1.9, -2, 2, rng);
    const SolveReport r = solve_fixed_point(limit, p, 0.0);
    EXPECT_EQ(r.regime, Regime::Contractive);
    EXPECT_EQ(r.starts_converged, 16);
    EXPECT_EQ(r.starts_agreed, 1);
    EXPECT_LE(r.max_pairwise_distance, 1e-8);
    EXPECT_LE(r.max_contraction_ratio, lipschitz_bound(p) + 1e-6);
  }
}

TEST(Properties, OptimumBeatsRandomCandidates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, 0, 1.9, -2, 2, rng);
    const SolveReport r = solve_fixed_point(limit, p, 0.0);
    for (int c = 0; c < 100; ++c)
      EXPECT_GT(r.free_energy, objective(limit, p, oracle::random_block_matrix(k, rng), 0.0));
  }
}

TEST(Properties, BlockPermutationEquivariance) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 2 + trial % 3;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, 0, 1.9, -2, 2, rng);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> b(k);
    for (int c = 0; c < k; ++c) b[c] = limit.weight(perm[c]);
    double head = 0.0;
    for (int c = 0; c + 1 < k; ++c) head += b[c];
    b[k - 1] = 1.0 - head;
    const SolveReport r = solve_fixed_point(limit, p, 0.0);
    const SolveReport q = solve_fixed_point(LimitPartition(b), p.permuted(perm), 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) EXPECT_NEAR(q.c_star(i, j), r.c_star(perm[i], perm[j]), 1e-10);
    EXPECT_NEAR(q.free_energy, r.free_energy, 1e-12);
  }
}

TEST(Properties, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 4;
    const LimitPartition limit = oracle::random_limit(k, rng);
    const ModelParams p = oracle::random_params(k, -3, 3, -2, 2, rng);
    const BlockMatrix c = interior_matrix(k, rng);
    const double s = 0.3;
    const std::vector<double> grad = objective_gradient(limit, p, c, s);
    const double step = 1e-6;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        std::vector<double> up = c.values(), down = c.values();
        up[i * k + j] += step;
        down[i * k + j] -= step;
        if (i != j) {
          up[j * k + i] += step;
          down[j * k + i] -= step;
        }
        const double fd = (objective(limit, p, BlockMatrix(k, up), s) - objective(limit, p, BlockMatrix(k, down), s)) / (2 * step);
        EXPECT_NEAR(grad[i * k + j], fd, 1e-6);
        EXPECT_EQ(grad[i * k + j], grad[j * k + i]);
      }
  }
}

TEST(Properties, HeuristicRegimeStillReportsConvergedPoint) {
  const LimitPartition limit({0.5, 0.5});
  std::vector<double> alpha(8, 6.0);
  const ModelParams p = ModelParams::symmetrized(2, alpha, std::vector<double>(4, -3.0));
  const SolveReport r = solve_fixed_point(limit, p, 0.0);
  EXPECT_EQ(r.regime, Regime::Ferromagnetic);
  EXPECT_LE(r.el_residual, 1e-12);
  for (const auto& s : r.starts)
    if (s.converged) EXPECT_GE(r.free_energy, s.objective);
}
