#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockergm/block_matrix.hpp"
#include "blockergm/graphon.hpp"
#include "blockergm/params.hpp"
#include "blockergm/partition.hpp"

namespace blockergm {

/// Scalar objective at C with every h_ij shifted by s:
/// (1/6) sum alpha b_i b_j b_l c_ij c_jl c_li + (1/2) sum (h_ij + s) b_i b_j c_ij
/// - (1/2) sum b_i b_j I(c_ij).
double objective(const LimitPartition& limit, const ModelParams& params, const BlockMatrix& c,
                 double s);

/// Partials of the objective along the symmetric coordinates: entry (p,q) is the
/// derivative when c_pq and c_qp move together. Requires interior entries.
std::vector<double> objective_gradient(const LimitPartition& limit, const ModelParams& params,
                                       const BlockMatrix& c, double s);

/// T_ij = sum_l b_l alpha_ijl c_il c_jl, row-major k x k.
std::vector<double> triangle_field(const LimitPartition& limit, const ModelParams& params,
                                   const BlockMatrix& c);

/// S(C)_ij = logistic(h_ij + s + T_ij).
BlockMatrix fixed_point_map(const LimitPartition& limit, const ModelParams& params,
                            const BlockMatrix& c, double s);

/// max |alpha| / 2.
double lipschitz_bound(const ModelParams& params);

enum class Regime { Contractive, Ferromagnetic, Heuristic };

Regime classify_regime(const ModelParams& params);
std::string to_string(Regime regime);

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  /// Defaults to 1 in the contractive regime and 0.5 otherwise.
  std::optional<double> damping;
  int random_starts = 13;
  std::uint64_t seed = 20240917;
};

struct StartOutcome {
  BlockMatrix final_iterate = BlockMatrix::constant(1, 0.0);
  double residual = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Largest ratio of successive step sizes observed while the previous step was in
  /// [1e-9, 1e-3); 0 if no such pair occurred.
  double max_contraction_ratio = 0.0;
};

struct SolveReport {
  BlockMatrix c_star = BlockMatrix::constant(1, 0.0);
  double free_energy = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Regime regime = Regime::Heuristic;
  /// Number of distinct limit points among the converged starts.
  int starts_agreed = 0;
  int starts_converged = 0;
  /// Largest pairwise sup-distance between converged limit points.
  double max_pairwise_distance = 0.0;
  double cluster_radius = 0.0;
  double max_contraction_ratio = 0.0;
  double damping = 1.0;
  double lipschitz = 0.0;
  std::vector<StartOutcome> starts;
};

/// Damped iteration C <- (1 - theta) C + theta S(C) from zeros, ones, logistic(h + s)
/// and opts.random_starts seeded random symmetric matrices; starts run in parallel.
/// Reports the converged point with the largest objective (ties: smallest row-major).
/// Throws NonConvergenceError when no start reaches opts.tol.
SolveReport solve_fixed_point(const LimitPartition& limit, const ModelParams& params, double s,
                              const SolverOptions& opts = {});

/// ||C - S(C)||_inf. Throws std::invalid_argument if an entry of C is 0 or 1.
double el_residual(const LimitPartition& limit, const ModelParams& params, const BlockMatrix& c,
                   double s);

/// sum b_i b_j c_ij.
double predicted_edge_density(const LimitPartition& limit, const BlockMatrix& c);

struct HolderCertificate {
  double left = 0.0;   // sum alpha_ijl t_ijl(triangle, g)
  double right = 0.0;  // sum alpha_ijl prod over cyclic shifts of (b_i int_{B_j x B_l} g^3)^{1/3}
  double gap = 0.0;    // right - left
};

/// Throws std::invalid_argument if alpha has a negative entry or g does not refine limit.
HolderCertificate holder_certificate(const LimitPartition& limit, const ModelParams& params,
                                     const StepGraphon& g);

namespace serial {
SolveReport solve_fixed_point(const LimitPartition& limit, const ModelParams& params, double s,
                              const SolverOptions& opts = {});
}  // namespace serial

}  // namespace blockergm
