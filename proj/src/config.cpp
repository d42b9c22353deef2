#include "blockergm/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "blockergm/errors.hpp"

namespace blockergm {

namespace {

using json = nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(child(path, key), "unknown key");
  }
}

double get_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT32_MAX))
    throw ConfigError(path, "integer out of range");
  return v.get<long long>();
}

int get_int(const json& v, const std::string& path, long long lo, long long hi) {
  const long long x = get_integer(v, path);
  if (x < lo || x > hi)
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

std::uint64_t get_seed(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(path, "expected a nonnegative integer seed");
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_double_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_double(v[i], child(path, i)));
  return out;
}

// Flattens a nested list of the given depth and side length.
void flatten(const json& v, const std::string& path, int depth, int side, std::vector<double>& out) {
  if (depth == 0) {
    out.push_back(get_double(v, path));
    return;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != side)
    throw ConfigError(path, "expected a list of length " + std::to_string(side));
  for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], child(path, i), depth - 1, side, out);
}

// Parses "i,j[,l]" with 1-based colors.
std::vector<int> parse_index_key(const std::string& key, int arity, int k, const std::string& path) {
  std::vector<int> idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw ConfigError(path, "index key must be " + std::to_string(arity) + " comma-separated colors");
    }
    if (used != part.size() && part.find_first_not_of(' ', used) != std::string::npos)
      throw ConfigError(path, "malformed index key");
    if (value < 1 || value > k) throw ConfigError(path, "color index out of range 1.." + std::to_string(k));
    idx.push_back(value - 1);
  }
  if (static_cast<int>(idx.size()) != arity)
    throw ConfigError(path, "index key must name " + std::to_string(arity) + " colors");
  return idx;
}

// Fills every permutation of the index multiset.
void assign_symmetric(std::vector<double>& dense, int k, std::vector<int> idx, double value) {
  std::sort(idx.begin(), idx.end());
  do {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * k + i;
    dense[flat] = value;
  } while (std::next_permutation(idx.begin(), idx.end()));
}

std::size_t power(int k, int arity) {
  std::size_t out = 1;
  for (int a = 0; a < arity; ++a) out *= static_cast<std::size_t>(k);
  return out;
}

// Coupling array of the given arity (2 for h, 3 for alpha) in any accepted form.
std::vector<double> parse_coupling(const json& v, const std::string& path, int k, int arity) {
  const std::size_t full = power(k, arity);
  std::vector<double> dense(full, 0.0);
  if (v.is_number()) {
    std::fill(dense.begin(), dense.end(), get_double(v, path));
    return dense;
  }
  if (v.is_object()) {
    std::set<std::vector<int>> seen;
    for (const auto& [key, value] : v.items()) {
      const std::string p = child(path, key);
      std::vector<int> idx = parse_index_key(key, arity, k, p);
      std::vector<int> canon = idx;
      std::sort(canon.begin(), canon.end());
      if (!seen.insert(canon).second) throw ConfigError(p, "duplicate entry for the same color multiset");
      assign_symmetric(dense, k, idx, get_double(value, p));
    }
    return dense;
  }
  if (!v.is_array()) throw ConfigError(path, "expected a number, list or sparse object");
  if (!v.empty() && v[0].is_array()) {
    std::vector<double> out;
    flatten(v, path, arity, k, out);
    return out;
  }
  const std::size_t upper = arity == 2 ? static_cast<std::size_t>(k) * (k + 1) / 2
                                       : static_cast<std::size_t>(k) * (k + 1) * (k + 2) / 6;
  if (v.size() == full) return get_double_list(v, path);
  if (v.size() == upper) {
    const std::vector<double> values = get_double_list(v, path);
    std::size_t next = 0;
    if (arity == 2) {
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) assign_symmetric(dense, k, {i, j}, values[next++]);
    } else {
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
          for (int l = j; l < k; ++l) assign_symmetric(dense, k, {i, j, l}, values[next++]);
    }
    return dense;
  }
  throw ConfigError(path, "expected " + std::to_string(full) + " entries (full) or " +
                              std::to_string(upper) + " entries (upper triangle), got " +
                              std::to_string(v.size()));
}

void parse_model(const json& m, ExperimentConfig& cfg) {
  reject_unknown(m, "model", {"k", "b", "alpha", "h"});
  if (!m.contains("k")) throw ConfigError("model.k", "missing required key");
  const int k = get_int(m["k"], "model.k", 1, 64);
  std::vector<double> b(static_cast<std::size_t>(k), 1.0 / k);
  if (m.contains("b")) {
    b = get_double_list(m["b"], "model.b");
    if (static_cast<int>(b.size()) != k) throw ConfigError("model.b", "expected k = " + std::to_string(k) + " weights");
  }
  try {
    cfg.limit = m.contains("b") ? LimitPartition(b) : LimitPartition::uniform(k);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model.b", e.what());
  }
  std::vector<double> alpha(power(k, 3), 0.0), h(power(k, 2), 0.0);
  if (m.contains("alpha")) alpha = parse_coupling(m["alpha"], "model.alpha", k, 3);
  if (m.contains("h")) h = parse_coupling(m["h"], "model.h", k, 2);
  try {
    cfg.params = ModelParams::symmetrized(k, std::move(alpha), std::move(h));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  // Symmetrization is exact by construction; this guards against non-finite leftovers.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (std::abs(cfg.params.h(i, j) - cfg.params.h(j, i)) > 1e-9)
        throw ConfigError("model.h", "asymmetric after averaging");
      for (int l = 0; l < k; ++l)
        if (std::abs(cfg.params.alpha(i, j, l) - cfg.params.alpha(j, l, i)) > 1e-9 ||
            std::abs(cfg.params.alpha(i, j, l) - cfg.params.alpha(j, i, l)) > 1e-9)
          throw ConfigError("model.alpha", "asymmetric after averaging");
    }
}

ExactSection parse_exact(const json& v) {
  reject_unknown(v, "exact", {"n", "max_edge_slots", "cgf_s"});
  ExactSection s;
  if (!v.contains("n")) throw ConfigError("exact.n", "missing required key");
  s.n = get_int(v["n"], "exact.n", 1, 1 << 20);
  if (v.contains("max_edge_slots")) s.max_edge_slots = get_int(v["max_edge_slots"], "exact.max_edge_slots", 0, 62);
  if (v.contains("cgf_s")) s.cgf_s = get_double_list(v["cgf_s"], "exact.cgf_s");
  return s;
}

SolveSection parse_solve(const json& v) {
  reject_unknown(v, "solve", {"s", "tol", "max_iter", "starts", "damping", "seed"});
  SolveSection s;
  if (v.contains("s")) s.s = get_double(v["s"], "solve.s");
  if (v.contains("tol")) {
    s.tol = get_double(v["tol"], "solve.tol");
    if (!(s.tol > 0.0)) throw ConfigError("solve.tol", "must be positive");
  }
  if (v.contains("max_iter")) s.max_iter = get_int(v["max_iter"], "solve.max_iter", 0, INT32_MAX);
  if (v.contains("starts")) s.starts = get_int(v["starts"], "solve.starts", 0, 100000);
  if (v.contains("damping")) {
    s.damping = get_double(v["damping"], "solve.damping");
    if (!(*s.damping > 0.0 && *s.damping <= 1.0)) throw ConfigError("solve.damping", "must lie in (0, 1]");
  }
  if (v.contains("seed")) s.seed = get_seed(v["seed"], "solve.seed");
  return s;
}

SampleSection parse_sample(const json& v) {
  reject_unknown(v, "sample", {"n", "sweeps", "burn_in", "thin", "chains", "seed"});
  SampleSection s;
  if (!v.contains("n")) throw ConfigError("sample.n", "missing required key");
  s.n = get_int(v["n"], "sample.n", 1, 1 << 16);
  if (v.contains("sweeps")) s.sweeps = get_int(v["sweeps"], "sample.sweeps", 1, INT32_MAX);
  if (v.contains("burn_in")) s.burn_in = get_int(v["burn_in"], "sample.burn_in", 0, INT32_MAX);
  if (v.contains("thin")) s.thin = get_int(v["thin"], "sample.thin", 1, INT32_MAX);
  if (v.contains("chains")) s.chains = get_int(v["chains"], "sample.chains", 1, 4096);
  if (v.contains("seed")) s.seed = get_seed(v["seed"], "sample.seed");
  if (s.sweeps <= s.burn_in) throw ConfigError("sample.sweeps", "must exceed sample.burn_in");
  if (s.sweeps - s.burn_in < s.thin) throw ConfigError("sample.thin", "no sample would be retained after burn-in");
  return s;
}

void validate_sweep_parameter(const std::string& p, int k) {
  std::vector<std::string> parts;
  std::stringstream ss(p);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  const auto bad = [&](const std::string& why) { throw ConfigError("sweep.parameter", why + ": \"" + p + "\""); };
  if (parts.empty()) bad("empty parameter");
  std::size_t arity = 0;
  if (parts[0] == "s") arity = 0;
  else if (parts[0] == "h") arity = 2;
  else if (parts[0] == "alpha") arity = 3;
  else bad("expected s, h.i.j or alpha.i.j.l");
  if (parts.size() != arity + 1) bad("wrong number of color indices");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty() || parts[i].find_first_not_of("0123456789") != std::string::npos) bad("malformed color index");
    const int c = std::stoi(parts[i]);
    if (c < 1 || c > k) bad("color index out of range");
  }
}

SweepSection parse_sweep(const json& v, int k) {
  reject_unknown(v, "sweep", {"parameter", "grid"});
  SweepSection s;
  if (v.contains("parameter")) s.parameter = get_string(v["parameter"], "sweep.parameter");
  validate_sweep_parameter(s.parameter, k);
  if (!v.contains("grid")) throw ConfigError("sweep.grid", "missing required key");
  s.grid = get_double_list(v["grid"], "sweep.grid");
  if (s.grid.empty()) throw ConfigError("sweep.grid", "grid must not be empty");
  return s;
}

DistanceSection parse_distance(const json& v) {
  reject_unknown(v, "distance", {"a", "b", "render_grid"});
  DistanceSection s;
  if (!v.contains("a")) throw ConfigError("distance.a", "missing required key");
  if (!v.contains("b")) throw ConfigError("distance.b", "missing required key");
  s.a = get_string(v["a"], "distance.a");
  s.b = get_string(v["b"], "distance.b");
  if (v.contains("render_grid")) s.render_grid = get_int(v["render_grid"], "distance.render_grid", 0, 4096);
  return s;
}

CertifySection parse_certify(const json& v) {
  reject_unknown(v, "certify", {"n", "trials", "seed"});
  CertifySection s;
  if (v.contains("n")) s.n = get_int(v["n"], "certify.n", 3, 7);
  if (v.contains("trials")) s.trials = get_int(v["trials"], "certify.trials", 1, 10000);
  if (v.contains("seed")) s.seed = get_seed(v["seed"], "certify.seed");
  return s;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::uint64_t ExperimentConfig::solve_seed() const {
  return solve && solve->seed ? *solve->seed : seed;
}
std::uint64_t ExperimentConfig::sample_seed() const {
  return sample && sample->seed ? *sample->seed : seed;
}
std::uint64_t ExperimentConfig::certify_seed() const {
  return certify && certify->seed ? *certify->seed : seed;
}

void ExperimentConfig::override_seed(std::uint64_t value) {
  seed = value;
  if (solve) solve->seed.reset();
  if (sample) sample->seed.reset();
  if (certify) certify->seed.reset();
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return limit == o.limit && params == o.params && seed == o.seed && exact == o.exact &&
         solve == o.solve && sample == o.sample && sweep == o.sweep && distance == o.distance &&
         certify == o.certify;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"model", "seed", "exact", "solve", "sample", "sweep", "distance", "certify"});
  if (!doc.contains("model")) throw ConfigError("model", "missing required section");
  ExperimentConfig cfg;
  parse_model(doc["model"], cfg);
  if (doc.contains("seed")) cfg.seed = get_seed(doc["seed"], "seed");
  if (doc.contains("exact")) cfg.exact = parse_exact(doc["exact"]);
  if (doc.contains("solve")) cfg.solve = parse_solve(doc["solve"]);
  if (doc.contains("sample")) cfg.sample = parse_sample(doc["sample"]);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"], cfg.params.k());
  if (doc.contains("distance")) cfg.distance = parse_distance(doc["distance"]);
  if (doc.contains("certify")) cfg.certify = parse_certify(doc["certify"]);
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json doc;
  doc["model"] = {{"k", cfg.params.k()},
                  {"b", cfg.limit.weights()},
                  {"alpha", cfg.params.alpha_tensor()},
                  {"h", cfg.params.h_matrix()}};
  doc["seed"] = cfg.seed;
  if (cfg.exact) {
    doc["exact"] = {{"n", cfg.exact->n}, {"max_edge_slots", cfg.exact->max_edge_slots}, {"cgf_s", cfg.exact->cgf_s}};
  }
  if (cfg.solve) {
    json s = {{"s", cfg.solve->s}, {"tol", cfg.solve->tol}, {"max_iter", cfg.solve->max_iter}, {"starts", cfg.solve->starts}};
    if (cfg.solve->damping) s["damping"] = *cfg.solve->damping;
    if (cfg.solve->seed) s["seed"] = *cfg.solve->seed;
    doc["solve"] = s;
  }
  if (cfg.sample) {
    json s = {{"n", cfg.sample->n},       {"sweeps", cfg.sample->sweeps}, {"burn_in", cfg.sample->burn_in},
              {"thin", cfg.sample->thin}, {"chains", cfg.sample->chains}};
    if (cfg.sample->seed) s["seed"] = *cfg.sample->seed;
    doc["sample"] = s;
  }
  if (cfg.sweep) doc["sweep"] = {{"parameter", cfg.sweep->parameter}, {"grid", cfg.sweep->grid}};
  if (cfg.distance)
    doc["distance"] = {{"a", cfg.distance->a}, {"b", cfg.distance->b}, {"render_grid", cfg.distance->render_grid}};
  if (cfg.certify) {
    json s = {{"n", cfg.certify->n}, {"trials", cfg.certify->trials}};
    if (cfg.certify->seed) s["seed"] = *cfg.certify->seed;
    doc["certify"] = s;
  }
  return doc.dump(2);
}

std::string config_digest(const ExperimentConfig& cfg) { return fnv1a_hex(serialize_config(cfg)); }

}  // namespace blockergm
