#include "blockergm/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "blockergm/errors.hpp"
#include "blockergm/numeric.hpp"

namespace blockergm {

namespace {

constexpr double kRatioFloor = 1e-9;
constexpr double kRatioCeiling = 1e-3;

void check_sizes(const LimitPartition& limit, const ModelParams& params, const BlockMatrix& c) {
  if (limit.k() != params.k() || c.k() != params.k())
    throw std::invalid_argument("partition, parameters and block matrix disagree on k");
}

std::size_t idx(int k, int i, int j) { return static_cast<std::size_t>(i) * k + j; }

StartOutcome iterate_from(const LimitPartition& limit, const ModelParams& params, double s,
                          BlockMatrix start, double theta, const SolverOptions& opts) {
  const int k = params.k();
  StartOutcome out;
  BlockMatrix current = std::move(start);
  double previous_step = -1.0;
  for (int it = 0;; ++it) {
    const BlockMatrix mapped = fixed_point_map(limit, params, current, s);
    const double residual = sup_distance(current, mapped);
    out.iterations = it;
    out.residual = residual;
    if (residual <= opts.tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;
    std::vector<double> next(static_cast<std::size_t>(k) * k);
    for (std::size_t e = 0; e < next.size(); ++e)
      next[e] = (1.0 - theta) * current.values()[e] + theta * mapped.values()[e];
    BlockMatrix updated(k, std::move(next));
    const double step = sup_distance(updated, current);
    if (previous_step >= kRatioFloor && previous_step < kRatioCeiling)
      out.max_contraction_ratio = std::max(out.max_contraction_ratio, step / previous_step);
    previous_step = step;
    current = std::move(updated);
  }
  out.objective = objective(limit, params, current, s);
  out.final_iterate = std::move(current);
  return out;
}

std::vector<BlockMatrix> start_set(const ModelParams& params, double s, const SolverOptions& opts) {
  const int k = params.k();
  std::vector<BlockMatrix> starts;
  starts.push_back(BlockMatrix::constant(k, 0.0));
  starts.push_back(BlockMatrix::constant(k, 1.0));
  std::vector<double> logistic_h(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) logistic_h[idx(k, i, j)] = logistic(params.h(i, j) + s);
  starts.emplace_back(k, std::move(logistic_h));
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < opts.random_starts; ++t) {
    std::vector<double> c(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) c[idx(k, i, j)] = c[idx(k, j, i)] = unit(rng);
    starts.emplace_back(k, std::move(c));
  }
  return starts;
}

bool preferred(const StartOutcome& a, const StartOutcome& b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  return a.final_iterate.values() < b.final_iterate.values();
}

SolveReport solve_impl(const LimitPartition& limit, const ModelParams& params, double s,
                       const SolverOptions& opts, bool parallel) {
  if (limit.k() != params.k()) throw std::invalid_argument("partition and parameters disagree on k");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (opts.max_iter < 0 || opts.random_starts < 0)
    throw std::invalid_argument("solver iteration and start counts must be nonnegative");
  SolveReport report;
  report.regime = classify_regime(params);
  report.lipschitz = lipschitz_bound(params);
  report.damping = opts.damping.value_or(report.regime == Regime::Contractive ? 1.0 : 0.5);
  if (!(report.damping > 0.0 && report.damping <= 1.0))
    throw std::invalid_argument("damping must lie in (0, 1]");

  const std::vector<BlockMatrix> starts = start_set(params, s, opts);
  const int count = static_cast<int>(starts.size());
  report.starts.resize(starts.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < count; ++t)
      report.starts[t] = iterate_from(limit, params, s, starts[t], report.damping, opts);
  } else {
    for (int t = 0; t < count; ++t)
      report.starts[t] = iterate_from(limit, params, s, starts[t], report.damping, opts);
  }

  const StartOutcome* best = nullptr;
  const StartOutcome* closest = nullptr;
  std::vector<const StartOutcome*> converged;
  for (const auto& o : report.starts) {
    report.max_contraction_ratio = std::max(report.max_contraction_ratio, o.max_contraction_ratio);
    if (!closest || o.residual < closest->residual) closest = &o;
    if (!o.converged) continue;
    converged.push_back(&o);
    if (!best || preferred(o, *best)) best = &o;
  }
  if (!best)
    throw NonConvergenceError("no solver start reached tolerance " + std::to_string(opts.tol) +
                                  " within " + std::to_string(opts.max_iter) + " iterations",
                              closest ? closest->residual : INFINITY);

  // Two iterates with residual <= tol lie within tol / (1 - L) of the unique fixed point
  // when L < 1. Outside that regime limit points are grouped at sqrt(tol).
  report.cluster_radius = report.lipschitz < 1.0
                              ? std::max(10.0 * opts.tol, 2.0 * opts.tol / (1.0 - report.lipschitz))
                              : std::max(10.0 * opts.tol, std::sqrt(opts.tol));
  std::vector<const StartOutcome*> representatives;
  for (const auto* o : converged) {
    for (const auto* other : converged)
      report.max_pairwise_distance = std::max(report.max_pairwise_distance,
                                              sup_distance(o->final_iterate, other->final_iterate));
    const bool known = std::any_of(representatives.begin(), representatives.end(), [&](const auto* r) {
      return sup_distance(r->final_iterate, o->final_iterate) <= report.cluster_radius;
    });
    if (!known) representatives.push_back(o);
  }
  report.starts_agreed = static_cast<int>(representatives.size());
  report.starts_converged = static_cast<int>(converged.size());
  report.c_star = best->final_iterate;
  report.free_energy = best->objective;
  report.el_residual = best->residual;
  report.iterations = best->iterations;
  report.converged = true;
  return report;
}

}  // namespace

double objective(const LimitPartition& limit, const ModelParams& params, const BlockMatrix& c,
                 double s) {
  check_sizes(limit, params, c);
  const int k = params.k();
  double triangle = 0.0, edge = 0.0, entropy = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double bij = limit.weight(i) * limit.weight(j);
      edge += (params.h(i, j) + s) * bij * c(i, j);
      entropy += bij * entropy_density(c(i, j));
      for (int l = 0; l < k; ++l)
        triangle += params.alpha(i, j, l) * bij * limit.weight(l) * c(i, j) * c(j, l) * c(l, i);
    }
  return triangle / 6.0 + edge / 2.0 - entropy / 2.0;
}

std::vector<double> triangle_field(const LimitPartition& limit, const ModelParams& params,
                                   const BlockMatrix& c) {
  check_sizes(limit, params, c);
  const int k = params.k();
  std::vector<double> t(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double v = 0.0;
      for (int l = 0; l < k; ++l) v += limit.weight(l) * params.alpha(i, j, l) * c(i, l) * c(j, l);
      t[idx(k, i, j)] = t[idx(k, j, i)] = v;
    }
  return t;
}

std::vector<double> objective_gradient(const LimitPartition& limit, const ModelParams& params,
                                       const BlockMatrix& c, double s) {
  const std::vector<double> t = triangle_field(limit, params, c);
  const int k = params.k();
  std::vector<double> grad(static_cast<std::size_t>(k) * k);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) {
      const double x = c(p, q);
      if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("gradient needs interior entries");
      const double factor = p == q ? 0.5 : 1.0;
      grad[idx(k, p, q)] = factor * limit.weight(p) * limit.weight(q) *
                           (t[idx(k, p, q)] + params.h(p, q) + s - logit(x));
    }
  return grad;
}

BlockMatrix fixed_point_map(const LimitPartition& limit, const ModelParams& params,
                            const BlockMatrix& c, double s) {
  std::vector<double> t = triangle_field(limit, params, c);
  const int k = params.k();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) t[idx(k, i, j)] = logistic(params.h(i, j) + s + t[idx(k, i, j)]);
  return BlockMatrix(k, std::move(t));
}

double lipschitz_bound(const ModelParams& params) { return params.alpha_inf() / 2.0; }

Regime classify_regime(const ModelParams& params) {
  if (!params.alpha_nonnegative()) return Regime::Heuristic;
  return params.alpha_inf() < 2.0 ? Regime::Contractive : Regime::Ferromagnetic;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Contractive: return "contractive";
    case Regime::Ferromagnetic: return "ferromagnetic";
    case Regime::Heuristic: return "heuristic";
  }
  return "heuristic";
}

SolveReport solve_fixed_point(const LimitPartition& limit, const ModelParams& params, double s,
                              const SolverOptions& opts) {
  return solve_impl(limit, params, s, opts, true);
}

namespace serial {
SolveReport solve_fixed_point(const LimitPartition& limit, const ModelParams& params, double s,
                              const SolverOptions& opts) {
  return solve_impl(limit, params, s, opts, false);
}
}  // namespace serial

double el_residual(const LimitPartition& limit, const ModelParams& params, const BlockMatrix& c,
                   double s) {
  check_sizes(limit, params, c);
  for (double x : c.values())
    if (x <= 0.0 || x >= 1.0)
      throw std::invalid_argument("Euler-Lagrange residual needs entries strictly inside (0,1)");
  return sup_distance(c, fixed_point_map(limit, params, c, s));
}

double predicted_edge_density(const LimitPartition& limit, const BlockMatrix& c) {
  if (limit.k() != c.k()) throw std::invalid_argument("partition and block matrix disagree on k");
  double total = 0.0;
  for (int i = 0; i < c.k(); ++i)
    for (int j = 0; j < c.k(); ++j) total += limit.weight(i) * limit.weight(j) * c(i, j);
  return total;
}

HolderCertificate holder_certificate(const LimitPartition& limit, const ModelParams& params,
                                     const StepGraphon& g) {
  if (!params.alpha_nonnegative())
    throw std::invalid_argument("the triangle certificate requires nonnegative alpha");
  if (params.k() != limit.k()) throw std::invalid_argument("parameters and partition disagree on k");
  if (!refines(g.kernel(), limit))
    throw std::invalid_argument("step graphon does not refine the limit partition");
  const int k = params.k();
  const std::vector<double> tri = triangle_density_tensor(g);
  const std::vector<double> cube = block_cube_integrals(g);
  HolderCertificate cert;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        const double a = params.alpha(i, j, l);
        if (a == 0.0) continue;
        cert.left += a * tri[(idx(k, i, j)) * k + l];
        cert.right += a * std::cbrt(limit.weight(i) * cube[idx(k, j, l)]) *
                      std::cbrt(limit.weight(j) * cube[idx(k, l, i)]) *
                      std::cbrt(limit.weight(l) * cube[idx(k, i, j)]);
      }
  cert.gap = cert.right - cert.left;
  return cert;
}

}  // namespace blockergm
