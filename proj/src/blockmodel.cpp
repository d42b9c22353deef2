#include "blockergm/blockmodel.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace blockergm {

std::vector<std::int64_t> block_edge_counts(const ColoredGraph& g) {
  const int k = g.k();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k) * k, 0);
  const auto& part = g.partition();
  for (int u = 0; u < g.n(); ++u) {
    const int cu = part.color_of(u);
    // v > u only, split by the block of v
    for (int j = cu; j < k; ++j) {
      const int lo = std::max(part.begin(j), u + 1);
      const int hi = part.end(j);
      for (int v = lo; v < hi; ++v)
        if (g.has_edge(u, v)) ++counts[cu * k + j];
    }
  }
  return counts;
}

std::vector<std::int64_t> block_triangle_counts(const ColoredGraph& g) {
  const int n = g.n();
  const int k = g.k();
  const std::size_t cells = static_cast<std::size_t>(k) * k * k;
  const auto& part = g.partition();
  std::vector<std::int64_t> total(cells, 0);

#pragma omp parallel
  {
    std::vector<std::int64_t> local(cells, 0);
#pragma omp for schedule(dynamic, 4) nowait
    for (int u = 0; u < n; ++u) {
      const int cu = part.color_of(u);
      for (int v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v)) continue;
        const int cv = part.color_of(v);
        for (int l = cv; l < k; ++l) {
          const int lo = std::max(part.begin(l), v + 1);
          local[(static_cast<std::size_t>(cu) * k + cv) * k + l] +=
              g.common_neighbors(u, v, lo, part.end(l));
        }
      }
    }
#pragma omp critical
    for (std::size_t c = 0; c < cells; ++c) total[c] += local[c];
  }
  return total;
}

namespace serial {
std::vector<std::int64_t> block_triangle_counts(const ColoredGraph& g) {
  const int n = g.n();
  const int k = g.k();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k) * k * k, 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (!g.has_edge(u, v)) continue;
      for (int w = v + 1; w < n; ++w)
        if (g.has_edge(u, w) && g.has_edge(v, w))
          ++counts[(static_cast<std::size_t>(g.color_of(u)) * k + g.color_of(v)) * k + g.color_of(w)];
    }
  return counts;
}
}  // namespace serial

double hamiltonian(const ColoredGraph& g, const ModelParams& p) {
  if (g.k() != p.k())
    throw std::invalid_argument("graph has k = " + std::to_string(g.k()) +
                                " colors but parameters have k = " + std::to_string(p.k()));
  const int k = g.k();
  const auto edges = block_edge_counts(g);
  const auto triangles = block_triangle_counts(g);
  double tri_term = 0.0;
  for (std::size_t c = 0; c < triangles.size(); ++c)
    tri_term += p.alpha_tensor()[c] * static_cast<double>(triangles[c]);
  double edge_term = 0.0;
  for (int c = 0; c < k * k; ++c) edge_term += p.h_matrix()[c] * static_cast<double>(edges[c]);
  return tri_term / g.n() + edge_term;
}

CellDensities discrete_cell_densities(const ColoredGraph& g) {
  const int k = g.k();
  const double n = g.n();
  const auto edges = block_edge_counts(g);
  const auto triangles = block_triangle_counts(g);
  CellDensities d;
  d.k = k;
  d.edge.assign(static_cast<std::size_t>(k) * k, 0.0);
  d.triangle.assign(static_cast<std::size_t>(k) * k * k, 0.0);

  // An unordered pair with colors (i, j) yields ordered pairs (i, j) and (j, i).
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double e = static_cast<double>(edges[i * k + j]);
      d.edge[i * k + j] += e;
      d.edge[j * k + i] += e;
    }
  // An unordered triangle contributes one ordered triple per vertex permutation.
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l) {
        const double t = static_cast<double>(triangles[(static_cast<std::size_t>(i) * k + j) * k + l]);
        if (t == 0.0) continue;
        const std::array<int, 3> c{i, j, l};
        for (const auto& p : perms)
          d.triangle[(static_cast<std::size_t>(c[p[0]]) * k + c[p[1]]) * k + c[p[2]]] += t;
      }
  for (double& x : d.edge) x /= n * n;
  for (double& x : d.triangle) x /= n * n * n;
  return d;
}

}  // namespace blockergm
