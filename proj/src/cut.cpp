#include "blockergm/cut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace blockergm {

namespace {

constexpr int kMaxExhaustiveCells = 30;
constexpr int kMaxAlternatingIterations = 200;

void check_kernel(const StepKernel& d) {
  const int m = d.cells();
  if (m < 1 || d.values.size() != static_cast<std::size_t>(m) * m ||
      d.boundaries.size() != static_cast<std::size_t>(m) + 1)
    throw std::invalid_argument("malformed step kernel");
}

std::vector<char> mask_to_set(std::uint64_t mask, int m) {
  std::vector<char> out(static_cast<std::size_t>(m), 0);
  for (int r = 0; r < m; ++r) out[r] = static_cast<char>((mask >> r) & 1U);
  return out;
}

// Weighted row sums restricted to a row mask: v_s = sum_{r in R} w_r w_s d_rs.
void column_sums(const StepKernel& d, std::uint64_t mask, std::vector<double>& v) {
  const int m = d.cells();
  std::fill(v.begin(), v.end(), 0.0);
  for (int r = 0; r < m; ++r) {
    if (!((mask >> r) & 1U)) continue;
    const double wr = d.width(r);
    for (int s = 0; s < m; ++s) v[s] += wr * d.value(r, s);
  }
  for (int s = 0; s < m; ++s) v[s] *= d.width(s);
}

// Best column set for fixed row contributions: the larger of the positive and negative mass.
double best_plain_columns(const std::vector<double>& v, std::vector<char>* cols) {
  double pos = 0.0, neg = 0.0;
  for (double x : v) (x > 0.0 ? pos : neg) += x;
  const bool use_pos = pos >= -neg;
  if (cols) {
    cols->assign(v.size(), 0);
    for (std::size_t s = 0; s < v.size(); ++s) (*cols)[s] = use_pos ? (v[s] > 0.0) : (v[s] < 0.0);
  }
  return use_pos ? pos : -neg;
}

// Per-color contributions: contrib[i * m + s] = sum_{r in R, c(r)=i} w_r w_s d_rs.
void colored_contributions(const StepKernel& d, const std::vector<char>& rows,
                           std::vector<double>& contrib) {
  const int m = d.cells();
  std::fill(contrib.begin(), contrib.end(), 0.0);
  for (int r = 0; r < m; ++r) {
    if (!rows[r]) continue;
    const double wr = d.width(r);
    double* line = contrib.data() + static_cast<std::size_t>(d.coloring[r]) * m;
    for (int s = 0; s < m; ++s) line[s] += wr * d.width(s) * d.value(r, s);
  }
}

// For each column color j, chooses S_j maximizing sum_i |sum_{s in S_j} contrib_i(s)|
// by enumerating sign patterns over the k row colors. Returns the total.
double best_colored_columns(const StepKernel& d, const std::vector<double>& contrib,
                            std::vector<char>* cols) {
  const int m = d.cells();
  const int k = d.colors;
  if (cols) cols->assign(static_cast<std::size_t>(m), 0);
  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    double best = -1.0;
    std::uint64_t best_signs = 0;
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << k); ++signs) {
      std::fill(sums.begin(), sums.end(), 0.0);
      for (int s = 0; s < m; ++s) {
        if (d.coloring[s] != j) continue;
        double proj = 0.0;
        for (int i = 0; i < k; ++i) {
          const double x = contrib[static_cast<std::size_t>(i) * m + s];
          proj += ((signs >> i) & 1U) ? -x : x;
        }
        if (proj > 0.0)
          for (int i = 0; i < k; ++i) sums[i] += contrib[static_cast<std::size_t>(i) * m + s];
      }
      double value = 0.0;
      for (double x : sums) value += std::abs(x);
      if (value > best) {
        best = value;
        best_signs = signs;
      }
    }
    total += best;
    if (cols) {
      for (int s = 0; s < m; ++s) {
        if (d.coloring[s] != j) continue;
        double proj = 0.0;
        for (int i = 0; i < k; ++i) {
          const double x = contrib[static_cast<std::size_t>(i) * m + s];
          proj += ((best_signs >> i) & 1U) ? -x : x;
        }
        (*cols)[s] = proj > 0.0;
      }
    }
  }
  return total;
}

StepKernel transpose(const StepKernel& d) {
  StepKernel t = d;
  const int m = d.cells();
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) t.values[static_cast<std::size_t>(r) * m + s] = d.value(s, r);
  return t;
}

struct Candidate {
  double value = -1.0;
  std::uint64_t mask = 0;
  bool better_than(const Candidate& o) const {
    return value > o.value || (value == o.value && mask < o.mask);
  }
};

template <typename Score>
Candidate search_masks(int m, Score score, bool parallel) {
  const std::int64_t total = std::int64_t{1} << m;
  Candidate best;
  if (!parallel) {
    for (std::int64_t mask = 0; mask < total; ++mask) {
      const Candidate c{score(static_cast<std::uint64_t>(mask)), static_cast<std::uint64_t>(mask)};
      if (c.better_than(best)) best = c;
    }
    return best;
  }
#pragma omp parallel
  {
    Candidate local;
#pragma omp for schedule(static)
    for (std::int64_t mask = 0; mask < total; ++mask) {
      const Candidate c{score(static_cast<std::uint64_t>(mask)), static_cast<std::uint64_t>(mask)};
      if (c.better_than(local)) local = c;
    }
#pragma omp critical(blockergm_cut_reduce)
    if (local.better_than(best)) best = local;
  }
  return best;
}

CutResult plain_exhaustive(const StepKernel& d, bool parallel) {
  check_kernel(d);
  const int m = d.cells();
  if (m > kMaxExhaustiveCells) throw std::invalid_argument("too many cells for exhaustive cut search");
  const auto score = [&d, m](std::uint64_t mask) {
    thread_local std::vector<double> v;
    v.resize(static_cast<std::size_t>(m));
    column_sums(d, mask, v);
    return best_plain_columns(v, nullptr);
  };
  const Candidate best = search_masks(m, score, parallel);
  CutResult out;
  out.rows = mask_to_set(best.mask, m);
  std::vector<double> v(static_cast<std::size_t>(m));
  column_sums(d, best.mask, v);
  best_plain_columns(v, &out.cols);
  out.value = cut_value(d, out.rows, out.cols);
  out.exact = true;
  return out;
}

CutResult colored_exhaustive(const StepKernel& d, bool parallel) {
  check_kernel(d);
  const int m = d.cells();
  if (m > kMaxExhaustiveCells) throw std::invalid_argument("too many cells for exhaustive cut search");
  const auto score = [&d, m](std::uint64_t mask) {
    thread_local std::vector<double> contrib;
    contrib.resize(static_cast<std::size_t>(d.colors) * m);
    colored_contributions(d, mask_to_set(mask, m), contrib);
    return best_colored_columns(d, contrib, nullptr);
  };
  const Candidate best = search_masks(m, score, parallel);
  CutResult out;
  out.rows = mask_to_set(best.mask, m);
  std::vector<double> contrib(static_cast<std::size_t>(d.colors) * m);
  colored_contributions(d, out.rows, contrib);
  best_colored_columns(d, contrib, &out.cols);
  out.value = colored_cut_value(d, out.rows, out.cols);
  out.exact = true;
  return out;
}

// Deterministic starting row sets: all cells, each singleton, then random subsets.
std::vector<std::vector<char>> starting_rows(int m, int restarts, std::uint64_t seed) {
  std::vector<std::vector<char>> starts;
  starts.emplace_back(static_cast<std::size_t>(m), 1);
  for (int r = 0; r < m; ++r) {
    std::vector<char> single(static_cast<std::size_t>(m), 0);
    single[r] = 1;
    starts.push_back(std::move(single));
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < restarts; ++t) {
    std::vector<char> rows(static_cast<std::size_t>(m));
    for (auto& x : rows) x = coin(rng);
    starts.push_back(std::move(rows));
  }
  return starts;
}

std::uint64_t set_to_mask(const std::vector<char>& rows) {
  std::uint64_t mask = 0;
  for (std::size_t r = 0; r < rows.size() && r < 64; ++r)
    if (rows[r]) mask |= std::uint64_t{1} << r;
  return mask;
}

}  // namespace

double cut_value(const StepKernel& d, const std::vector<char>& rows, const std::vector<char>& cols) {
  check_kernel(d);
  const int m = d.cells();
  if (rows.size() != static_cast<std::size_t>(m) || cols.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("subset size does not match the cell count");
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    if (!rows[r]) continue;
    for (int s = 0; s < m; ++s)
      if (cols[s]) total += d.width(r) * d.width(s) * d.value(r, s);
  }
  return std::abs(total);
}

double colored_cut_value(const StepKernel& d, const std::vector<char>& rows,
                         const std::vector<char>& cols) {
  check_kernel(d);
  const int m = d.cells();
  const int k = d.colors;
  if (rows.size() != static_cast<std::size_t>(m) || cols.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("subset size does not match the cell count");
  std::vector<double> block(static_cast<std::size_t>(k) * k, 0.0);
  for (int r = 0; r < m; ++r) {
    if (!rows[r]) continue;
    for (int s = 0; s < m; ++s)
      if (cols[s])
        block[static_cast<std::size_t>(d.coloring[r]) * k + d.coloring[s]] +=
            d.width(r) * d.width(s) * d.value(r, s);
  }
  double total = 0.0;
  for (double x : block) total += std::abs(x);
  return total;
}

CutResult cut_norm_exhaustive(const StepKernel& d) { return plain_exhaustive(d, true); }
CutResult colored_cut_exhaustive(const StepKernel& d) { return colored_exhaustive(d, true); }

namespace serial {
CutResult cut_norm_exhaustive(const StepKernel& d) { return plain_exhaustive(d, false); }
CutResult colored_cut_exhaustive(const StepKernel& d) { return colored_exhaustive(d, false); }
}  // namespace serial

CutResult cut_norm_alternating(const StepKernel& d, int restarts, std::uint64_t seed) {
  check_kernel(d);
  const int m = d.cells();
  const StepKernel dt = transpose(d);
  CutResult best;
  best.value = -1.0;
  std::vector<double> v(static_cast<std::size_t>(m));
  for (const auto& start : starting_rows(m, restarts, seed)) {
    // The signed objective is maximized separately for each sign.
    for (const double sign : {1.0, -1.0}) {
      std::vector<char> rows = start, cols(static_cast<std::size_t>(m), 0);
      double current = -1.0;
      for (int it = 0; it < kMaxAlternatingIterations; ++it) {
        column_sums(d, set_to_mask(rows), v);
        for (int s = 0; s < m; ++s) cols[s] = sign * v[s] > 0.0;
        column_sums(dt, set_to_mask(cols), v);
        for (int r = 0; r < m; ++r) rows[r] = sign * v[r] > 0.0;
        const double value = cut_value(d, rows, cols);
        if (value <= current) break;
        current = value;
      }
      const double value = cut_value(d, rows, cols);
      if (value > best.value) {
        best.value = value;
        best.rows = rows;
        best.cols = cols;
      }
    }
  }
  best.exact = false;
  return best;
}

CutResult colored_cut_alternating(const StepKernel& d, int restarts, std::uint64_t seed) {
  check_kernel(d);
  const int m = d.cells();
  const StepKernel dt = transpose(d);
  CutResult best;
  best.value = -1.0;
  std::vector<double> contrib(static_cast<std::size_t>(d.colors) * m);
  for (const auto& start : starting_rows(m, restarts, seed)) {
    std::vector<char> rows = start, cols;
    double current = -1.0;
    for (int it = 0; it < kMaxAlternatingIterations; ++it) {
      colored_contributions(d, rows, contrib);
      best_colored_columns(d, contrib, &cols);
      colored_contributions(dt, cols, contrib);
      best_colored_columns(dt, contrib, &rows);
      const double value = colored_cut_value(d, rows, cols);
      if (value <= current) break;
      current = value;
    }
    if (cols.empty()) {
      colored_contributions(d, rows, contrib);
      best_colored_columns(d, contrib, &cols);
    }
    const double value = colored_cut_value(d, rows, cols);
    if (value > best.value) {
      best.value = value;
      best.rows = rows;
      best.cols = cols;
    }
  }
  best.exact = false;
  return best;
}

CutResult cut_norm(const StepKernel& d, const CutOptions& opts) {
  check_kernel(d);
  if (d.cells() <= opts.exact_threshold) return cut_norm_exhaustive(d);
  return cut_norm_alternating(d, opts.restarts, opts.seed);
}

CutResult colored_cut_distance(const StepGraphon& a, const StepGraphon& b,
                               const LimitPartition& limit, const CutOptions& opts) {
  if (!refines(a.kernel(), limit) || !refines(b.kernel(), limit))
    throw std::invalid_argument("both graphons must refine the limit partition");
  const StepKernel d = difference(a, b);
  if (d.cells() <= opts.exact_threshold) return colored_cut_exhaustive(d);
  return colored_cut_alternating(d, opts.restarts, opts.seed);
}

}  // namespace blockergm
