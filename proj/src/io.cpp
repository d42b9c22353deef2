#include "blockergm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace blockergm {

namespace {

[[noreturn]] void fail_line(int line, const std::string& message) {
  throw std::invalid_argument("edge list line " + std::to_string(line) + ": " + message);
}

int locate_cell(const std::vector<double>& boundaries, double x) {
  const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), x);
  return std::clamp(static_cast<int>(it - boundaries.begin()) - 1, 0, static_cast<int>(boundaries.size()) - 2);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ColoredGraph read_edge_list(std::istream& in, const LimitPartition& limit) {
  std::vector<int> sizes;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> edge_lines;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "blocks:") {
      if (!sizes.empty()) fail_line(line, "duplicate blocks line");
      long long w = 0;
      while (ss >> w) {
        if (w < 0) fail_line(line, "negative block size");
        sizes.push_back(static_cast<int>(w));
      }
      if (!ss.eof()) fail_line(line, "block sizes must be integers");
      if (sizes.empty()) fail_line(line, "blocks line lists no sizes");
      continue;
    }
    std::istringstream pair(raw);
    long long u = 0, v = 0;
    std::string rest;
    if (!(pair >> u >> v) || (pair >> rest)) fail_line(line, "expected \"u v\"");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    edge_lines.push_back(line);
  }
  if (sizes.empty()) throw std::invalid_argument("edge list has no \"blocks:\" line");
  if (static_cast<int>(sizes.size()) != limit.k())
    throw std::invalid_argument("edge list names " + std::to_string(sizes.size()) + " blocks but the model has " +
                                std::to_string(limit.k()));
  ColoredGraph g(FinitePartition(sizes, limit));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    if (u < 1 || v < 1 || u > g.n() || v > g.n()) fail_line(edge_lines[e], "vertex out of range 1.." + std::to_string(g.n()));
    if (u == v) fail_line(edge_lines[e], "self-loops are not allowed");
    g.set_edge(u - 1, v - 1, true);
  }
  return g;
}

void write_edge_list(std::ostream& out, const ColoredGraph& g) {
  out << "blocks:";
  for (int w : g.partition().sizes()) out << ' ' << w;
  out << '\n';
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (g.has_edge(u, v)) out << (u + 1) << ' ' << (v + 1) << '\n';
}

StepGraphon read_graphon_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed graphon JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("graphon JSON must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "boundaries" && key != "values" && key != "coloring" && key != "colors")
      throw std::invalid_argument("graphon JSON: unknown key \"" + key + "\"");
  }
  StepKernel k;
  try {
    k.boundaries = doc.at("boundaries").get<std::vector<double>>();
    k.values = doc.at("values").get<std::vector<double>>();
    k.coloring = doc.at("coloring").get<std::vector<int>>();
    for (int& c : k.coloring) --c;
    k.colors = doc.contains("colors") ? doc.at("colors").get<int>()
                                      : 1 + *std::max_element(k.coloring.begin(), k.coloring.end());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("graphon JSON: ") + e.what());
  }
  return StepGraphon(std::move(k));
}

void write_graphon_json(std::ostream& out, const StepGraphon& g) {
  nlohmann::json doc;
  doc["boundaries"] = g.kernel().boundaries;
  doc["values"] = g.kernel().values;
  std::vector<int> coloring = g.kernel().coloring;
  for (int& c : coloring) ++c;
  doc["coloring"] = coloring;
  doc["colors"] = g.colors();
  out << doc.dump() << '\n';
}

void write_grid_csv(std::ostream& out, const StepGraphon& g, int size) {
  if (size < 1) throw std::invalid_argument("grid size must be positive");
  std::vector<int> cell(static_cast<std::size_t>(size));
  for (int a = 0; a < size; ++a) cell[a] = locate_cell(g.kernel().boundaries, (a + 0.5) / size);
  for (int a = 0; a < size; ++a) {
    for (int c = 0; c < size; ++c) {
      if (c) out << ',';
      out << format_double(g.value(cell[a], cell[c]));
    }
    out << '\n';
  }
}

}  // namespace blockergm
