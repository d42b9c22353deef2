#pragma once

#include <span>
#include <utility>
#include <vector>

#include "blockergm/block_matrix.hpp"
#include "blockergm/colored_graph.hpp"
#include "blockergm/params.hpp"
#include "blockergm/partition.hpp"

namespace blockergm {



/// Symmetric piecewise-constant function on [0,1]^2. Cell r is
/// [boundaries[r], boundaries[r+1]) and carries the color coloring[r] in [0, colors).
/// Values are real and unconstrained; see StepGraphon for the [0,1]-valued case.
struct StepKernel {
  std::vector<double> boundaries;
  std::vector<double> values;  // row-major cells x cells
  std::vector<int> coloring;
  int colors = 1;

  int cells() const { return static_cast<int>(coloring.size()); }
  double width(int r) const { return boundaries[r + 1] - boundaries[r]; }
  double value(int r, int s) const { return values[static_cast<std::size_t>(r) * cells() + s]; }
  double sup_norm() const;
};

/// A StepKernel whose values are symmetric and lie in [0,1].
class StepGraphon {
 public:
  /// Throws std::invalid_argument if the breakpoints are not strictly increasing from
  /// 0 to 1, the values are not symmetric (1e-12) or leave [0,1], or a color is out of range.
  explicit StepGraphon(StepKernel kernel);

  const StepKernel& kernel() const { return kernel_; }
  int cells() const { return kernel_.cells(); }
  int colors() const { return kernel_.colors; }
  double width(int r) const { return kernel_.width(r); }
  double value(int r, int s) const { return kernel_.value(r, s); }
  int color(int r) const { return kernel_.coloring[r]; }

 private:
  StepKernel kernel_;
};

/// True if every cell lies inside the limit block named by its color (tolerance 1e-12).
bool refines(const StepKernel& kernel, const LimitPartition& limit);

/// Checkerboard graphon of g: n cells of width 1/n colored by the finite partition.
StepGraphon checkerboard(const ColoredGraph& g);

/// Replaces the coloring of g by the limit partition, splitting cells at the limit
/// block boundaries so the result refines `limit`.
StepGraphon color_blind(const StepGraphon& g, const LimitPartition& limit);

/// Block-constant graphon g_C with k cells at the limit block boundaries.
StepGraphon block_graphon(const LimitPartition& limit, const BlockMatrix& c);

/// Both kernels resampled on the merged breakpoint grid (duplicates within 1e-15 merged).
/// Throws std::invalid_argument if their colorings disagree on a common cell.
std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b);

/// a - b on the common refinement.
StepKernel difference(const StepGraphon& a, const StepGraphon& b);

enum class Pattern { Edge, Triangle };

/// Unnormalized cell-restricted density: the integral over B_{c1} x ... of the
/// product of g over the pattern edges, as an exact weighted sum over cells.
double cell_density(Pattern pattern, const StepGraphon& g, std::span<const int> colors);

/// All edge densities at once: entry i*k + j equals cell_density(Edge, g, {i, j}).
std::vector<double> edge_density_matrix(const StepGraphon& g);
/// All triangle densities at once: entry (i*k + j)*k + l equals cell_density(Triangle, g, {i, j, l}).
std::vector<double> triangle_density_tensor(const StepGraphon& g);

/// sum over cell pairs of width_r width_s I(g_rs).
double entropy_functional(const StepGraphon& g);

/// (1/6) sum alpha_{ijl} t_{ijl}(triangle, g) + (1/2) sum h_ij t_ij(edge, g), using the
/// coloring carried by g.
double interaction_functional(const LimitPartition& limit, const ModelParams& params,
                              const StepGraphon& g);

/// (T g)(x, y) = integral of alpha_{c(x)c(y)c(z)} g(x,z) g(y,z) dz, on the grid of g.
StepKernel triangle_operator(const LimitPartition& limit, const ModelParams& params,
                             const StepGraphon& g);

/// Integral of g^3 over B_i x B_j, entry i*k + j.
std::vector<double> block_cube_integrals(const StepGraphon& g);

/// Discretization error bounds for replacing the finite coloring by the limit one.
struct DiscretizationBounds {
  double eta = 0.0;             // max_i |w_i/n - b_i|
  double edge_bound = 0.0;      // (4k - 2) eta
  double triangle_bound = 0.0;  // (6k - 3) eta
};
DiscretizationBounds discretization_bounds(const FinitePartition& fp);

}  // namespace blockergm
