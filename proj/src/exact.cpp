#include "blockergm/exact.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "blockergm/errors.hpp"
#include "blockergm/numeric.hpp"

namespace blockergm {

namespace {

// Edge slots and the per-edge weights needed for O(deg) Hamiltonian updates.
struct EdgeTable {
  int n = 0;
  int m = 0;
  std::vector<int> u, v;
  std::vector<double> h;          // h_{c(u)c(v)}
  std::vector<double> wedge;      // [e * n + w] = alpha_{c(u)c(v)c(w)} / n
};

EdgeTable make_edge_table(const FinitePartition& partition, const ModelParams& params,
                          const EnumerationOptions& opts) {
  if (partition.k() != params.k())
    throw std::invalid_argument("partition and parameters disagree on k");
  const int n = partition.n();
  const long long slots = static_cast<long long>(n) * (n - 1) / 2;
  if (slots > opts.max_edge_slots)
    throw ResourceLimitError("exact enumeration needs " + std::to_string(slots) +
                             " edge slots (n = " + std::to_string(n) +
                             "), above the cap of " + std::to_string(opts.max_edge_slots));
  if (slots > 62) throw ResourceLimitError("enumeration cap cannot exceed 62 edge slots");
  EdgeTable t;
  t.n = n;
  t.m = static_cast<int>(slots);
  t.wedge.assign(static_cast<std::size_t>(t.m) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const int e = static_cast<int>(t.u.size());
      t.u.push_back(a);
      t.v.push_back(b);
      const int ca = partition.color_of(a), cb = partition.color_of(b);
      t.h.push_back(params.h(ca, cb));
      for (int w = 0; w < n; ++w)
        if (w != a && w != b)
          t.wedge[static_cast<std::size_t>(e) * n + w] = params.alpha(ca, cb, partition.color_of(w)) / n;
    }
  return t;
}

// Current configuration as adjacency bitmasks (n <= 64 by the slot cap).
struct State {
  std::vector<std::uint64_t> rows;
  double energy = 0.0;
  int edges = 0;
};

// Energy change for switching edge e on, given the current neighborhoods.
inline double switch_on_delta(const EdgeTable& t, const State& s, int e) {
  std::uint64_t common = s.rows[t.u[e]] & s.rows[t.v[e]];
  double d = t.h[e];
  const double* wedge = t.wedge.data() + static_cast<std::size_t>(e) * t.n;
  while (common) {
    d += wedge[std::countr_zero(common)];
    common &= common - 1;
  }
  return d;
}

inline void toggle(const EdgeTable& t, State& s, int e) {
  const std::uint64_t bu = std::uint64_t{1} << t.u[e];
  const std::uint64_t bv = std::uint64_t{1} << t.v[e];
  const bool on = (s.rows[t.u[e]] & bv) != 0;
  if (on) {
    s.rows[t.u[e]] &= ~bv;
    s.rows[t.v[e]] &= ~bu;
    s.energy -= switch_on_delta(t, s, e);
    --s.edges;
  } else {
    s.energy += switch_on_delta(t, s, e);
    s.rows[t.u[e]] |= bv;
    s.rows[t.v[e]] |= bu;
    ++s.edges;
  }
}

// Enumerates all settings of edges [0, free_bits) with edges [free_bits, m) fixed to
// the bits of `prefix`, in reflected Gray-code order.
LogSumExp enumerate_chunk(const EdgeTable& t, int free_bits, std::uint64_t prefix) {
  State s;
  s.rows.assign(static_cast<std::size_t>(t.n), 0);
  for (int e = free_bits; e < t.m; ++e)
    if ((prefix >> (e - free_bits)) & 1U) toggle(t, s, e);
  LogSumExp acc;
  acc.add(s.energy, s.edges);
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < steps; ++step) {
    toggle(t, s, std::countr_zero(step));
    acc.add(s.energy, s.edges);
  }
  return acc;
}

ExactResult finish(const FinitePartition& partition, const ModelParams& params,
                   const LogSumExp& acc) {
  const double n = partition.n();
  ExactResult r;
  r.n = partition.n();
  r.k = partition.k();
  r.log_z = acc.log_value();
  r.free_energy_n = r.log_z / (n * n);
  r.mean_edge_density = 2.0 * acc.weighted_mean() / (n * n);
  r.params_digest = params_digest(params);
  return r;
}

}  // namespace

ExactResult log_partition_enumerate(const FinitePartition& partition, const ModelParams& params,
                                    const EnumerationOptions& opts) {
  const EdgeTable t = make_edge_table(partition, params, opts);
  const int prefix_bits = std::max(0, std::min(opts.prefix_bits, t.m));
  const int free_bits = t.m - prefix_bits;
  const long long chunks = 1LL << prefix_bits;
  std::vector<LogSumExp> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < chunks; ++c)
    partial[static_cast<std::size_t>(c)] = enumerate_chunk(t, free_bits, static_cast<std::uint64_t>(c));
  LogSumExp total;
  for (const auto& p : partial) total.merge(p);
  return finish(partition, params, total);
}

namespace serial {
ExactResult log_partition_enumerate(const FinitePartition& partition, const ModelParams& params,
                                    const EnumerationOptions& opts) {
  const EdgeTable t = make_edge_table(partition, params, opts);
  return finish(partition, params, enumerate_chunk(t, t.m, 0));
}
}  // namespace serial

double log_partition_factorized(const FinitePartition& partition, std::span<const double> h) {
  const int k = partition.k();
  if (h.size() != static_cast<std::size_t>(k) * k)
    throw std::invalid_argument("h must be a k x k matrix");
  double log_z = 0.0;
  for (int i = 0; i < k; ++i) {
    const double wi = partition.size(i);
    log_z += 0.5 * wi * (wi - 1.0) * softplus(h[i * k + i]);
    for (int j = i + 1; j < k; ++j) log_z += wi * partition.size(j) * softplus(h[i * k + j]);
  }
  return log_z;
}

double scaled_cgf(const FinitePartition& partition, const ModelParams& params, double s,
                  const EnumerationOptions& opts) {
  const double s_values[] = {s};
  return scaled_cgf_curve(partition, params, s_values, opts).front();
}

std::vector<double> scaled_cgf_curve(const FinitePartition& partition, const ModelParams& params,
                                     std::span<const double> s_values,
                                     const EnumerationOptions& opts) {
  const double base = log_partition_enumerate(partition, params, opts).free_energy_n;
  std::vector<double> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    if (s == 0.0) {
      out.push_back(0.0);
      continue;
    }
    const double shifted = log_partition_enumerate(partition, params.shifted(s), opts).free_energy_n;
    out.push_back(2.0 * (shifted - base));
  }
  return out;
}

}  // namespace blockergm
