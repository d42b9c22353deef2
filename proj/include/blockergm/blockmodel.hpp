#pragma once

#include <cstdint>
#include <vector>

#include "blockergm/colored_graph.hpp"
#include "blockergm/params.hpp"

namespace blockergm {

/// Entry i*k + j counts edges {u, v}, u < v, u in B_i, v in B_j.
std::vector<std::int64_t> block_edge_counts(const ColoredGraph& g);

/// Entry (i*k + j)*k + l counts triangles u < v < w with u in B_i, v in B_j, w in B_l.
/// Bitset kernel, parallel over the smallest vertex.
std::vector<std::int64_t> block_triangle_counts(const ColoredGraph& g);

/// (1/n) sum alpha_{ijl} T_{ijl} + sum h_{ij} E_{ij}; each edge and triangle counted once.
double hamiltonian(const ColoredGraph& g, const ModelParams& p);

/// Ordered-tuple cell densities of the checkerboard graphon under the finite coloring:
/// edge(i,j) = #{(u,v): u in B_i, v in B_j, X_uv = 1} / n^2,
/// triangle(i,j,l) = #{(u,v,w) pairwise adjacent with those colors} / n^3.
struct CellDensities {
  int k = 0;
  std::vector<double> edge;
  std::vector<double> triangle;
};
CellDensities discrete_cell_densities(const ColoredGraph& g);

namespace serial {
/// Reference triple loop over vertex triples.
std::vector<std::int64_t> block_triangle_counts(const ColoredGraph& g);
}  // namespace serial

}  // namespace blockergm
