#pragma once

#include <cstdint>
#include <vector>

#include "blockergm/graphon.hpp"

namespace blockergm {

struct CutOptions {
  /// Cell counts up to this value are searched exhaustively.
  int exact_threshold = 14;
  /// Random restarts of the alternating maximization above the threshold.
  int restarts = 32;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
};

/// Optimal (or best found) row/column cell subsets and their value.
struct CutResult {
  double value = 0.0;
  std::vector<char> rows;
  std::vector<char> cols;
  bool exact = true;  // false: lower bound from the alternating heuristic
};

/// |sum_{r in R, s in S} w_r w_s d_rs| for the given subsets, summed in a fixed order.
double cut_value(const StepKernel& d, const std::vector<char>& rows, const std::vector<char>& cols);
/// sum_{i,j} |sum_{r in R cap B_i, s in S cap B_j} w_r w_s d_rs|.
double colored_cut_value(const StepKernel& d, const std::vector<char>& rows,
                         const std::vector<char>& cols);

/// Cut norm of a step kernel: exhaustive for cells <= exact_threshold, alternating
/// maximization (flagged inexact) beyond.
CutResult cut_norm(const StepKernel& d, const CutOptions& opts = {});
CutResult cut_norm_exhaustive(const StepKernel& d);
CutResult cut_norm_alternating(const StepKernel& d, int restarts, std::uint64_t seed);

/// Colored cut distance between two graphons refining the same limit partition,
/// computed on the given representatives.
CutResult colored_cut_distance(const StepGraphon& a, const StepGraphon& b,
                               const LimitPartition& limit, const CutOptions& opts = {});
CutResult colored_cut_exhaustive(const StepKernel& d);
CutResult colored_cut_alternating(const StepKernel& d, int restarts, std::uint64_t seed);

namespace serial {
CutResult cut_norm_exhaustive(const StepKernel& d);
CutResult colored_cut_exhaustive(const StepKernel& d);
}  // namespace serial

}  // namespace blockergm
