#include "blockergm/colored_graph.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace blockergm {

ColoredGraph::ColoredGraph(FinitePartition partition)
    : n_(partition.n()), words_((partition.n() + 63) / 64), partition_(std::move(partition)),
      rows_(static_cast<std::size_t>(n_) * words_, 0) {}

void ColoredGraph::set_edge(int u, int v, bool present) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw std::invalid_argument("vertex out of range: " + std::to_string(u) + ", " +
                                std::to_string(v));
  if (u == v) throw std::invalid_argument("loops are not allowed");
  const std::uint64_t bit_v = std::uint64_t{1} << (v & 63);
  const std::uint64_t bit_u = std::uint64_t{1} << (u & 63);
  auto& word_uv = rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)];
  auto& word_vu = rows_[static_cast<std::size_t>(v) * words_ + (u >> 6)];
  if (present) {
    word_uv |= bit_v;
    word_vu |= bit_u;
  } else {
    word_uv &= ~bit_v;
    word_vu &= ~bit_u;
  }
}

std::int64_t ColoredGraph::edge_count() const {
  std::int64_t twice = 0;
  for (std::uint64_t w : rows_) twice += std::popcount(w);
  return twice / 2;
}

int ColoredGraph::degree(int u) const {
  int d = 0;
  for (std::uint64_t w : row(u)) d += std::popcount(w);
  return d;
}

int ColoredGraph::common_neighbors(int u, int v, int lo, int hi) const {
  if (lo >= hi) return 0;
  const std::uint64_t* ru = rows_.data() + static_cast<std::size_t>(u) * words_;
  const std::uint64_t* rv = rows_.data() + static_cast<std::size_t>(v) * words_;
  const int first = lo >> 6;
  const int last = (hi - 1) >> 6;
  int count = 0;
  for (int wi = first; wi <= last; ++wi) {
    std::uint64_t word = ru[wi] & rv[wi];
    if (wi == first) word &= ~std::uint64_t{0} << (lo & 63);
    if (wi == last && (hi & 63) != 0) word &= (std::uint64_t{1} << (hi & 63)) - 1;
    count += std::popcount(word);
  }
  return count;
}

}  // namespace blockergm
