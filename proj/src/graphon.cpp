#include "blockergm/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "blockergm/numeric.hpp"

namespace blockergm {

namespace {

constexpr double kMergeTolerance = 1e-15;

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double x : all)
    if (merged.empty() || x - merged.back() > kMergeTolerance) merged.push_back(x);
  merged.front() = 0.0;
  merged.back() = 1.0;
  return merged;
}

// Index of the cell of `boundaries` that contains x.
int locate(const std::vector<double>& boundaries, double x) {
  const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
  const int idx = static_cast<int>(it - boundaries.begin()) - 1;
  return std::clamp(idx, 0, static_cast<int>(boundaries.size()) - 2);
}

void check_colors(const StepGraphon& g, std::span<const int> colors) {
  for (int c : colors)
    if (c < 0 || c >= g.colors())
      throw std::invalid_argument("color " + std::to_string(c) + " out of range [0, " +
                                  std::to_string(g.colors()) + ")");
}

void require_refinement(const StepGraphon& g, const LimitPartition& limit, const ModelParams& p) {
  if (p.k() != limit.k()) throw std::invalid_argument("parameters and partition disagree on k");
  if (!refines(g.kernel(), limit))
    throw std::invalid_argument("step graphon does not refine the limit partition");
}

}  // namespace

double StepKernel::sup_norm() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

StepGraphon::StepGraphon(StepKernel kernel) : kernel_(std::move(kernel)) {
  const int m = kernel_.cells();
  if (m < 1) throw std::invalid_argument("step graphon needs at least one cell");
  if (kernel_.boundaries.size() != static_cast<std::size_t>(m) + 1)
    throw std::invalid_argument("step graphon needs cells + 1 breakpoints");
  if (kernel_.values.size() != static_cast<std::size_t>(m) * m)
    throw std::invalid_argument("step graphon needs cells^2 values");
  if (std::abs(kernel_.boundaries.front()) > 1e-15 || std::abs(kernel_.boundaries.back() - 1.0) > 1e-12)
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  for (int r = 0; r < m; ++r)
    if (!(kernel_.boundaries[r + 1] > kernel_.boundaries[r]))
      throw std::invalid_argument("breakpoints must be strictly increasing");
  if (kernel_.colors < 1) throw std::invalid_argument("color count must be positive");
  for (int c : kernel_.coloring)
    if (c < 0 || c >= kernel_.colors) throw std::invalid_argument("cell color out of range");
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      const double x = kernel_.value(r, s);
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("graphon values must lie in [0,1]");
      if (std::abs(x - kernel_.value(s, r)) > 1e-12)
        throw std::invalid_argument("graphon values must be symmetric");
    }
}

bool refines(const StepKernel& kernel, const LimitPartition& limit) {
  if (kernel.colors != limit.k()) return false;
  for (int r = 0; r < kernel.cells(); ++r) {
    const int c = kernel.coloring[r];
    if (kernel.boundaries[r] < limit.left(c) - 1e-12 || kernel.boundaries[r + 1] > limit.right(c) + 1e-12)
      return false;
  }
  return true;
}

StepGraphon checkerboard(const ColoredGraph& g) {
  const int n = g.n();
  StepKernel k;
  k.colors = g.k();
  k.boundaries.resize(static_cast<std::size_t>(n) + 1);
  for (int r = 0; r <= n; ++r) k.boundaries[r] = static_cast<double>(r) / n;
  k.coloring = g.partition().colors();
  k.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && g.has_edge(u, v)) k.values[static_cast<std::size_t>(u) * n + v] = 1.0;
  return StepGraphon(std::move(k));
}

StepGraphon color_blind(const StepGraphon& g, const LimitPartition& limit) {
  const auto& src = g.kernel();
  StepKernel k;
  k.colors = limit.k();
  k.boundaries = merge_breakpoints(src.boundaries, limit.boundaries());
  const int m = static_cast<int>(k.boundaries.size()) - 1;
  std::vector<int> parent(static_cast<std::size_t>(m));
  k.coloring.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const double mid = 0.5 * (k.boundaries[r] + k.boundaries[r + 1]);
    parent[r] = locate(src.boundaries, mid);
    k.coloring[r] = locate(limit.boundaries(), mid);
  }
  k.values.resize(static_cast<std::size_t>(m) * m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) k.values[static_cast<std::size_t>(r) * m + s] = src.value(parent[r], parent[s]);
  return StepGraphon(std::move(k));
}

StepGraphon block_graphon(const LimitPartition& limit, const BlockMatrix& c) {
  if (c.k() != limit.k()) throw std::invalid_argument("block matrix and partition disagree on k");
  StepKernel k;
  k.colors = limit.k();
  k.boundaries = limit.boundaries();
  k.coloring.resize(static_cast<std::size_t>(limit.k()));
  for (int i = 0; i < limit.k(); ++i) k.coloring[i] = i;
  k.values = c.values();
  return StepGraphon(std::move(k));
}

std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b) {
  if (a.colors != b.colors) throw std::invalid_argument("kernels use different color counts");
  const std::vector<double> grid = merge_breakpoints(a.boundaries, b.boundaries);
  const int m = static_cast<int>(grid.size()) - 1;
  std::vector<int> pa(static_cast<std::size_t>(m)), pb(static_cast<std::size_t>(m));
  StepKernel ra, rb;
  ra.colors = rb.colors = a.colors;
  ra.boundaries = rb.boundaries = grid;
  ra.coloring.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const double mid = 0.5 * (grid[r] + grid[r + 1]);
    pa[r] = locate(a.boundaries, mid);
    pb[r] = locate(b.boundaries, mid);
    if (a.coloring[pa[r]] != b.coloring[pb[r]])
      throw std::invalid_argument("colorings disagree on [" + std::to_string(grid[r]) + ", " +
                                  std::to_string(grid[r + 1]) + ")");
    ra.coloring[r] = a.coloring[pa[r]];
  }
  rb.coloring = ra.coloring;
  ra.values.resize(static_cast<std::size_t>(m) * m);
  rb.values.resize(static_cast<std::size_t>(m) * m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      ra.values[static_cast<std::size_t>(r) * m + s] = a.value(pa[r], pa[s]);
      rb.values[static_cast<std::size_t>(r) * m + s] = b.value(pb[r], pb[s]);
    }
  return {std::move(ra), std::move(rb)};
}

StepKernel difference(const StepGraphon& a, const StepGraphon& b) {
  auto [ra, rb] = common_refinement(a.kernel(), b.kernel());
  for (std::size_t i = 0; i < ra.values.size(); ++i) ra.values[i] -= rb.values[i];
  return ra;
}

double cell_density(Pattern pattern, const StepGraphon& g, std::span<const int> colors) {
  const int m = g.cells();
  if (pattern == Pattern::Edge) {
    if (colors.size() != 2) throw std::invalid_argument("edge pattern needs two colors");
    check_colors(g, colors);
    double total = 0.0;
    for (int r = 0; r < m; ++r) {
      if (g.color(r) != colors[0]) continue;
      for (int s = 0; s < m; ++s)
        if (g.color(s) == colors[1]) total += g.width(r) * g.width(s) * g.value(r, s);
    }
    return total;
  }
  if (colors.size() != 3) throw std::invalid_argument("triangle pattern needs three colors");
  check_colors(g, colors);
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    if (g.color(r) != colors[0]) continue;
    for (int s = 0; s < m; ++s) {
      if (g.color(s) != colors[1]) continue;
      const double grs = g.width(r) * g.width(s) * g.value(r, s);
      if (grs == 0.0) continue;
      for (int t = 0; t < m; ++t)
        if (g.color(t) == colors[2]) total += grs * g.width(t) * g.value(s, t) * g.value(r, t);
    }
  }
  return total;
}

std::vector<double> edge_density_matrix(const StepGraphon& g) {
  const int k = g.colors();
  std::vector<double> out(static_cast<std::size_t>(k) * k, 0.0);
  for (int r = 0; r < g.cells(); ++r)
    for (int s = 0; s < g.cells(); ++s)
      out[static_cast<std::size_t>(g.color(r)) * k + g.color(s)] += g.width(r) * g.width(s) * g.value(r, s);
  return out;
}

std::vector<double> triangle_density_tensor(const StepGraphon& g) {
  const int k = g.colors();
  const int m = g.cells();
  std::vector<double> out(static_cast<std::size_t>(k) * k * k, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      const double grs = g.width(r) * g.width(s) * g.value(r, s);
      if (grs == 0.0) continue;
      double* line = out.data() + (static_cast<std::size_t>(g.color(r)) * k + g.color(s)) * k;
      for (int t = 0; t < m; ++t) line[g.color(t)] += grs * g.width(t) * g.value(s, t) * g.value(r, t);
    }
  return out;
}

double entropy_functional(const StepGraphon& g) {
  double total = 0.0;
  for (int r = 0; r < g.cells(); ++r)
    for (int s = 0; s < g.cells(); ++s) total += g.width(r) * g.width(s) * entropy_density(g.value(r, s));
  return total;
}

double interaction_functional(const LimitPartition& limit, const ModelParams& params,
                              const StepGraphon& g) {
  require_refinement(g, limit, params);
  const int m = g.cells();
  double triangle = 0.0;
  double edge = 0.0;
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      const double grs = g.width(r) * g.width(s) * g.value(r, s);
      edge += params.h(g.color(r), g.color(s)) * grs;
      if (grs == 0.0) continue;
      double inner = 0.0;
      for (int t = 0; t < m; ++t)
        inner += params.alpha(g.color(r), g.color(s), g.color(t)) * g.width(t) * g.value(s, t) *
                 g.value(r, t);
      triangle += grs * inner;
    }
  return triangle / 6.0 + edge / 2.0;
}

StepKernel triangle_operator(const LimitPartition& limit, const ModelParams& params,
                             const StepGraphon& g) {
  require_refinement(g, limit, params);
  const int m = g.cells();
  StepKernel out;
  out.boundaries = g.kernel().boundaries;
  out.coloring = g.kernel().coloring;
  out.colors = g.colors();
  out.values.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = r; s < m; ++s) {
      double v = 0.0;
      for (int t = 0; t < m; ++t)
        v += g.width(t) * params.alpha(g.color(r), g.color(s), g.color(t)) * g.value(r, t) * g.value(s, t);
      out.values[static_cast<std::size_t>(r) * m + s] = v;
      out.values[static_cast<std::size_t>(s) * m + r] = v;
    }
  return out;
}

std::vector<double> block_cube_integrals(const StepGraphon& g) {
  const int k = g.colors();
  std::vector<double> out(static_cast<std::size_t>(k) * k, 0.0);
  for (int r = 0; r < g.cells(); ++r)
    for (int s = 0; s < g.cells(); ++s) {
      const double x = g.value(r, s);
      out[static_cast<std::size_t>(g.color(r)) * k + g.color(s)] += g.width(r) * g.width(s) * x * x * x;
    }
  return out;
}

DiscretizationBounds discretization_bounds(const FinitePartition& fp) {
  DiscretizationBounds b;
  b.eta = fp.eta();
  b.edge_bound = (4.0 * fp.k() - 2.0) * b.eta;
  b.triangle_bound = (6.0 * fp.k() - 3.0) * b.eta;
  return b;
}

}  // namespace blockergm
