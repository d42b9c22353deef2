#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blockergm/colored_graph.hpp"
#include "blockergm/graphon.hpp"
#include "blockergm/partition.hpp"

namespace blockergm {

/// 17 significant digits ("%.17g"); non-finite values print as nan, inf, -inf.
std::string format_double(double x);

/// Edge-list text: one "u v" pair per line (1-based), a line "blocks: w1 ... wk" giving
/// the consecutive block sizes, '#' starting a comment. Throws std::invalid_argument
/// with the line number on malformed input.
ColoredGraph read_edge_list(std::istream& in, const LimitPartition& limit);
void write_edge_list(std::ostream& out, const ColoredGraph& g);

/// Graphon JSON: {"boundaries": [...], "values": [row-major], "coloring": [1-based], "colors": k}.
StepGraphon read_graphon_json(std::istream& in);
void write_graphon_json(std::ostream& out, const StepGraphon& g);

/// size x size samples of g at cell midpoints, one CSV row per x.
void write_grid_csv(std::ostream& out, const StepGraphon& g, int size);

}  // namespace blockergm
