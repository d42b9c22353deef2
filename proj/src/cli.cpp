#include "blockergm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockergm/blockmodel.hpp"
#include "blockergm/cut.hpp"
#include "blockergm/errors.hpp"
#include "blockergm/exact.hpp"
#include "blockergm/graphon.hpp"
#include "blockergm/io.hpp"
#include "blockergm/sampler.hpp"
#include "blockergm/variational.hpp"

namespace blockergm {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class Session {
 public:
  Session(const ExperimentConfig& cfg, const RunContext& ctx, std::uint64_t seed)
      : cfg_(cfg), ctx_(ctx), digest_(config_digest(cfg)), seed_(seed), generated_at_(timestamp()) {
    fs::create_directories(ctx_.out_dir);
  }

  std::ostream& log() { return ctx_.log ? *ctx_.log : std::cerr; }
  const std::string& digest() const { return digest_; }
  std::uint64_t seed() const { return seed_; }

  json report_header(const std::string& command) const {
    return json{{"command", command},
                {"config_digest", digest_},
                {"seed", seed_},
                {"generated_at", generated_at_},
                {"params_digest", params_digest(cfg_.params)},
                {"asymmetry_corrected", cfg_.params.asymmetry_corrected()}};
  }

  void write_json(const std::string& name, const json& doc) {
    std::ofstream out(ctx_.out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + (ctx_.out_dir / name).string());
    out << doc.dump(2) << '\n';
  }

  /// CSV with a metadata comment line followed by the header and rows.
  void write_csv(const std::string& name, const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(ctx_.out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + (ctx_.out_dir / name).string());
    out << metadata_line() << '\n';
    write_row(out, columns);
    for (const auto& row : rows) write_row(out, row);
  }

  /// Appends rows, writing the metadata and header lines only when the file is new.
  void append_csv(const std::string& name, const std::vector<std::string>& columns,
                  const std::vector<std::vector<std::string>>& rows) {
    const fs::path path = ctx_.out_dir / name;
    const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (fresh) {
      out << metadata_line() << '\n';
      write_row(out, columns);
    }
    for (const auto& row : rows) write_row(out, row);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(ctx_.out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + (ctx_.out_dir / name).string());
    return out;
  }

  fs::path resolve(const std::string& path) const {
    const fs::path p(path);
    return p.is_absolute() ? p : ctx_.base_dir / p;
  }

 private:
  static std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string metadata_line() const {
    return "# generated_at=" + generated_at_ + " config_digest=" + digest_ + " seed=" + std::to_string(seed_);
  }

  static void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }

  const ExperimentConfig& cfg_;
  RunContext ctx_;
  std::string digest_;
  std::uint64_t seed_;
  std::string generated_at_;
};

json matrix_json(const BlockMatrix& c) {
  json rows = json::array();
  for (int i = 0; i < c.k(); ++i) {
    json row = json::array();
    for (int j = 0; j < c.k(); ++j) row.push_back(c(i, j));
    rows.push_back(row);
  }
  return rows;
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o;
  if (cfg.solve) {
    o.tol = cfg.solve->tol;
    o.max_iter = cfg.solve->max_iter;
    o.random_starts = cfg.solve->starts;
    o.damping = cfg.solve->damping;
  }
  o.seed = cfg.solve_seed();
  return o;
}

double solve_shift(const ExperimentConfig& cfg) { return cfg.solve ? cfg.solve->s : 0.0; }

json solve_json(const LimitPartition& limit, const SolveReport& r) {
  json starts = json::array();
  for (const auto& s : r.starts)
    starts.push_back({{"converged", s.converged},
                      {"residual", s.residual},
                      {"objective", s.objective},
                      {"iterations", s.iterations},
                      {"max_contraction_ratio", s.max_contraction_ratio}});
  return json{{"c_star", matrix_json(r.c_star)},
              {"free_energy", r.free_energy},
              {"el_residual", r.el_residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"regime", to_string(r.regime)},
              {"starts_agreed", r.starts_agreed},
              {"starts_converged", r.starts_converged},
              {"max_pairwise_distance", r.max_pairwise_distance},
              {"cluster_radius", r.cluster_radius},
              {"max_contraction_ratio", r.max_contraction_ratio},
              {"lipschitz_bound", r.lipschitz},
              {"damping", r.damping},
              {"predicted_edge_density", predicted_edge_density(limit, r.c_star)},
              {"starts", starts}};
}

FinitePartition partition_for(int n, const LimitPartition& limit, const std::string& key) {
  try {
    return build_finite_partition(n, limit);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

// ---------------------------------------------------------------- exact

int cmd_exact(const ExperimentConfig& cfg, Session& session) {
  if (!cfg.exact) throw ConfigError("exact", "section required by the exact command");
  const FinitePartition partition = partition_for(cfg.exact->n, cfg.limit, "exact.n");
  EnumerationOptions opts;
  opts.max_edge_slots = cfg.exact->max_edge_slots;
  session.log() << "enumerating n=" << partition.n() << " (" << partition.n() * (partition.n() - 1) / 2
                << " edge slots)\n";
  const ExactResult r = log_partition_enumerate(partition, cfg.params, opts);

  json report = session.report_header("exact");
  report["result"] = {{"log_z", r.log_z},
                      {"free_energy_n", r.free_energy_n},
                      {"mean_edge_density", r.mean_edge_density},
                      {"n", r.n},
                      {"k", r.k},
                      {"params_digest", r.params_digest}};
  report["block_sizes"] = partition.sizes();
  if (cfg.params.alpha_inf() == 0.0)
    report["log_z_factorized"] = log_partition_factorized(partition, cfg.params.h_matrix());
  session.append_csv("exact.csv", {"n", "k", "log_z", "free_energy_n", "mean_edge_density", "params_digest"},
                     {{std::to_string(r.n), std::to_string(r.k), format_double(r.log_z),
                       format_double(r.free_energy_n), format_double(r.mean_edge_density), r.params_digest}});
  if (!cfg.exact->cgf_s.empty()) {
    const std::vector<double> curve = scaled_cgf_curve(partition, cfg.params, cfg.exact->cgf_s, opts);
    json cgf = json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      cgf.push_back({{"s", cfg.exact->cgf_s[i]}, {"cgf", curve[i]}});
      rows.push_back({format_double(cfg.exact->cgf_s[i]), format_double(curve[i])});
    }
    report["scaled_cgf"] = cgf;
    session.write_csv("cgf.csv", {"s", "cgf"}, rows);
  }
  session.write_json("report.json", report);
  session.log() << "log_z = " << format_double(r.log_z) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const ExperimentConfig& cfg, Session& session) {
  const SolveReport r = solve_fixed_point(cfg.limit, cfg.params, solve_shift(cfg), solver_options(cfg));
  json report = session.report_header("solve");
  report["s"] = solve_shift(cfg);
  report["solution"] = solve_json(cfg.limit, r);
  const bool unique_ok = r.regime != Regime::Contractive || r.starts_agreed == 1;
  report["uniqueness_check"] = unique_ok;
  session.write_json("report.json", report);
  {
    std::ofstream out = session.open("graphon_cstar.json");
    write_graphon_json(out, block_graphon(cfg.limit, r.c_star));
  }
  session.log() << "free_energy = " << format_double(r.free_energy) << " regime=" << to_string(r.regime)
                << " clusters=" << r.starts_agreed << '\n';
  if (!unique_ok) {
    session.log() << "invariant failure: contractive regime but " << r.starts_agreed << " distinct limit points\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const ExperimentConfig& cfg, Session& session) {
  if (!cfg.sample) throw ConfigError("sample", "section required by the sample command");
  ChainConfig cc;
  cc.n = cfg.sample->n;
  cc.sweeps = cfg.sample->sweeps;
  cc.burn_in = cfg.sample->burn_in;
  cc.thin = cfg.sample->thin;
  cc.chains = cfg.sample->chains;
  cc.seed = cfg.sample_seed();
  partition_for(cc.n, cfg.limit, "sample.n");
  const LLNReport r = lln_experiment(cfg.limit, cfg.params, cc.n, cc, solver_options(cfg));
  if (r.out_of_regime)
    session.log() << "WARNING: parameters are outside the contractive regime (alpha >= 0, ||alpha||_inf < 2); "
                     "the prediction is not covered by the convergence guarantee\n";
  json report = session.report_header("sample");
  report["lln"] = {{"n", r.n},
                   {"empirical_mean", r.empirical_mean},
                   {"empirical_sd", r.empirical_sd},
                   {"standard_error", r.standard_error},
                   {"predicted", r.predicted},
                   {"abs_gap", r.abs_gap},
                   {"per_chain_means", r.per_chain_means},
                   {"seed", r.seed},
                   {"out_of_regime", r.out_of_regime},
                   {"regime", to_string(r.regime)}};
  report["chain"] = {{"sweeps", cc.sweeps}, {"burn_in", cc.burn_in}, {"thin", cc.thin}, {"chains", cc.chains}};
  json chain_seeds = json::array();
  for (const auto& t : r.traces) {
    chain_seeds.push_back(t.seed);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < t.sweep.size(); ++i)
      rows.push_back({std::to_string(t.sweep[i]), format_double(t.edge_density[i])});
    session.write_csv("trace_chain" + std::to_string(t.chain) + ".csv", {"sweep", "edge_density"}, rows);
  }
  report["chain_seeds"] = chain_seeds;
  report["solution"] = solve_json(cfg.limit, r.solve);
  session.write_json("report.json", report);
  session.log() << "empirical " << format_double(r.empirical_mean) << " predicted " << format_double(r.predicted)
                << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

ModelParams with_parameter(const ModelParams& base, const std::string& path, double value) {
  std::vector<int> idx;
  std::stringstream ss(path);
  std::string part;
  std::getline(ss, part, '.');
  const std::string name = part;
  while (std::getline(ss, part, '.')) idx.push_back(std::stoi(part) - 1);
  const int k = base.k();
  std::vector<double> alpha = base.alpha_tensor();
  std::vector<double> h = base.h_matrix();
  std::sort(idx.begin(), idx.end());
  do {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * k + i;
    (name == "h" ? h : alpha)[flat] = value;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return ModelParams::symmetrized(k, std::move(alpha), std::move(h));
}

int cmd_sweep(const ExperimentConfig& cfg, Session& session) {
  if (!cfg.sweep) throw ConfigError("sweep", "section required by the sweep command");
  const SolverOptions opts = solver_options(cfg);
  const bool over_s = cfg.sweep->parameter == "s";
  std::vector<std::vector<std::string>> rows;
  json points = json::array();
  int failures = 0;
  for (double value : cfg.sweep->grid) {
    const double s = over_s ? value : solve_shift(cfg);
    const ModelParams params = over_s ? cfg.params : with_parameter(cfg.params, cfg.sweep->parameter, value);
    try {
      const SolveReport r = solve_fixed_point(cfg.limit, params, s, opts);
      const double density = predicted_edge_density(cfg.limit, r.c_star);
      rows.push_back({format_double(value), format_double(r.free_energy), format_double(density),
                      format_double(r.el_residual), to_string(r.regime)});
      points.push_back({{"value", value}, {"s", s}, {"solution", solve_json(cfg.limit, r)}});
    } catch (const NonConvergenceError& e) {
      ++failures;
      session.log() << "no convergence at " << cfg.sweep->parameter << "=" << format_double(value) << ": "
                    << e.what() << '\n';
      rows.push_back({format_double(value), "nan", "nan", format_double(e.best_residual()), "nonconverged"});
      points.push_back({{"value", value}, {"s", s}, {"error", e.what()}, {"best_residual", e.best_residual()}});
    }
  }
  const std::string first = over_s ? "s" : cfg.sweep->parameter;
  session.write_csv("sweep.csv", {first, "free_energy", "edge_density_pred", "el_residual", "regime"}, rows);
  json report = session.report_header("sweep");
  report["parameter"] = cfg.sweep->parameter;
  report["points"] = points;
  report["nonconverged"] = failures;
  session.write_json("report.json", report);
  return failures ? kExitNonConvergence : kExitOk;
}

// ---------------------------------------------------------------- distance

StepGraphon load_graphon(const fs::path& path, const LimitPartition& limit) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  if (path.extension() == ".json") return read_graphon_json(in);
  return color_blind(checkerboard(read_edge_list(in, limit)), limit);
}

int cmd_distance(const ExperimentConfig& cfg, Session& session) {
  if (!cfg.distance) throw ConfigError("distance", "section required by the distance command");
  StepGraphon a = [&] {
    try {
      return load_graphon(session.resolve(cfg.distance->a), cfg.limit);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("distance.a", e.what());
    }
  }();
  StepGraphon b = [&] {
    try {
      return load_graphon(session.resolve(cfg.distance->b), cfg.limit);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("distance.b", e.what());
    }
  }();
  if (!refines(a.kernel(), cfg.limit)) throw ConfigError("distance.a", "graphon does not refine the model partition");
  if (!refines(b.kernel(), cfg.limit)) throw ConfigError("distance.b", "graphon does not refine the model partition");

  CutOptions opts;
  opts.seed = cfg.seed;
  const StepKernel d = difference(a, b);
  const CutResult cut = cut_norm(d, opts);
  const CutResult colored = colored_cut_distance(a, b, cfg.limit, opts);
  const int k = cfg.limit.k();
  const std::vector<double> ta = triangle_density_tensor(a), tb = triangle_density_tensor(b);
  const std::vector<double> ea = edge_density_matrix(a), eb = edge_density_matrix(b);
  double tri_gap = 0.0, edge_gap = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) tri_gap = std::max(tri_gap, std::abs(ta[i] - tb[i]));
  for (std::size_t i = 0; i < ea.size(); ++i) edge_gap = std::max(edge_gap, std::abs(ea[i] - eb[i]));

  json report = session.report_header("distance");
  report["cells"] = d.cells();
  report["cut_norm"] = {{"value", cut.value}, {"exact", cut.exact}};
  report["colored_cut_distance"] = {{"value", colored.value}, {"exact", colored.exact}};
  report["sandwich"] = {{"lower_holds", cut.value <= colored.value + 1e-12},
                        {"upper_bound", k * k * cut.value},
                        {"certified", cut.exact && colored.exact}};
  report["max_triangle_density_gap"] = tri_gap;
  report["max_edge_density_gap"] = edge_gap;
  report["triangle_continuity_bound"] = 3.0 * cut.value;
  session.write_json("report.json", report);
  {
    std::ofstream out = session.open("graphon_a.json");
    write_graphon_json(out, a);
  }
  {
    std::ofstream out = session.open("graphon_b.json");
    write_graphon_json(out, b);
  }
  if (cfg.distance->render_grid > 0) {
    std::ofstream ga = session.open("grid_a.csv");
    write_grid_csv(ga, a, cfg.distance->render_grid);
    std::ofstream gb = session.open("grid_b.csv");
    write_grid_csv(gb, b, cfg.distance->render_grid);
  }
  session.log() << "cut_norm " << format_double(cut.value) << (cut.exact ? "" : " (lower bound)")
                << " colored " << format_double(colored.value) << (colored.exact ? "" : " (lower bound)") << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- certify

struct Check {
  std::string name;
  std::string status;  // "pass", "fail" or "skipped"
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

StepGraphon random_refining_graphon(const LimitPartition& limit, int max_cells_per_block, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pieces(1, max_cells_per_block);
  StepKernel k;
  k.colors = limit.k();
  k.boundaries.push_back(0.0);
  for (int i = 0; i < limit.k(); ++i) {
    const int p = pieces(rng);
    std::vector<double> cuts;
    for (int c = 1; c < p; ++c) cuts.push_back(limit.left(i) + (0.05 + 0.9 * unit(rng)) * limit.weight(i));
    std::sort(cuts.begin(), cuts.end());
    for (double x : cuts)
      if (x > k.boundaries.back() + 1e-9) {
        k.boundaries.push_back(x);
        k.coloring.push_back(i);
      }
    k.boundaries.push_back(limit.right(i));
    k.coloring.push_back(i);
  }
  k.boundaries.back() = 1.0;
  const int m = k.cells();
  k.values.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int s = r; s < m; ++s) k.values[r * m + s] = k.values[s * m + r] = unit(rng);
  return StepGraphon(std::move(k));
}

ColoredGraph random_graph(const FinitePartition& partition, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = unit(rng);
  ColoredGraph g(partition);
  for (int u = 0; u < partition.n(); ++u)
    for (int v = u + 1; v < partition.n(); ++v)
      if (unit(rng) < p) g.set_edge(u, v, true);
  return g;
}

Check bounded(const std::string& name, double measured, double bound, const std::string& detail) {
  return Check{name, measured <= bound ? "pass" : "fail", measured, bound, detail};
}

std::vector<Check> certify_checks(const ExperimentConfig& cfg, std::uint64_t seed, std::ostream& log) {
  const int n = std::max(cfg.certify ? cfg.certify->n : 5, cfg.limit.k());
  const int trials = cfg.certify ? cfg.certify->trials : 20;
  const int k = cfg.limit.k();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Check> checks;

  {
    const FinitePartition partition = build_finite_partition(n, cfg.limit);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> h(static_cast<std::size_t>(k) * k);
      for (double& x : h) x = -3.0 + 6.0 * unit(rng);
      const ModelParams p = ModelParams::symmetrized(k, std::vector<double>(static_cast<std::size_t>(k) * k * k, 0.0), h);
      const double enumerated = log_partition_enumerate(partition, p).log_z;
      const double closed = log_partition_factorized(partition, p.h_matrix());
      worst = std::max(worst, std::abs(enumerated - closed) / std::max(1.0, std::abs(closed)));
    }
    checks.push_back(bounded("factorization", worst, 1e-10, "relative log Z gap, enumeration vs closed form at alpha = 0"));
  }

  const double lipschitz = lipschitz_bound(cfg.params);
  try {
    const SolveReport r = solve_fixed_point(cfg.limit, cfg.params, solve_shift(cfg), solver_options(cfg));
    checks.push_back(bounded("euler_lagrange", el_residual(cfg.limit, cfg.params, r.c_star, solve_shift(cfg)), 1e-10,
                             "sup-norm residual of the fixed-point system at the reported optimum"));
    if (r.regime == Regime::Contractive)
      checks.push_back(bounded("contraction_rate", r.max_contraction_ratio, lipschitz + 1e-6,
                               "late-stage ratio of successive solver steps"));
  } catch (const NonConvergenceError& e) {
    checks.push_back(Check{"euler_lagrange", "fail", e.best_residual(), 1e-10, e.what()});
  }

  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> x(static_cast<std::size_t>(k) * k), y(x.size());
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
          x[i * k + j] = x[j * k + i] = unit(rng);
          y[i * k + j] = y[j * k + i] = unit(rng);
        }
      const BlockMatrix a(k, x), b(k, y);
      const double dist = sup_distance(a, b);
      if (dist == 0.0) continue;
      const double image = sup_distance(fixed_point_map(cfg.limit, cfg.params, a, 0.0),
                                        fixed_point_map(cfg.limit, cfg.params, b, 0.0));
      worst = std::max(worst, image / dist);
    }
    checks.push_back(bounded("lipschitz", worst, lipschitz + 1e-12, "largest observed ||S(C)-S(D)|| / ||C-D||"));
  }

  {
    const FinitePartition partition = build_finite_partition(std::max(n, 12), cfg.limit);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const ColoredGraph g = random_graph(partition, rng);
      const double h = hamiltonian(g, cfg.params);
      const CellDensities d = discrete_cell_densities(g);
      double tri = 0.0, edge = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          edge += cfg.params.h(i, j) * d.edge[i * k + j];
          for (int l = 0; l < k; ++l) tri += cfg.params.alpha(i, j, l) * d.triangle[(i * k + j) * k + l];
        }
      const double nn = static_cast<double>(g.n()) * g.n();
      const double identity = nn * (tri / 6.0 + edge / 2.0);
      worst = std::max(worst, std::abs(h - identity) / std::max(1.0, std::abs(h)));
    }
    checks.push_back(bounded("hamiltonian_density_identity", worst, 1e-9,
                             "relative gap between H and n^2 times the density functional"));
  }

  if (!cfg.params.alpha_nonnegative()) {
    checks.push_back(Check{"holder_certificate", "skipped", 0.0, 0.0, "alpha has negative entries"});
  } else {
    double worst_gap = INFINITY, worst_equality = 0.0;
    for (int t = 0; t < trials; ++t) {
      worst_gap = std::min(worst_gap, holder_certificate(cfg.limit, cfg.params, random_refining_graphon(cfg.limit, 3, rng)).gap);
      std::vector<double> c(static_cast<std::size_t>(k) * k);
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) c[i * k + j] = c[j * k + i] = unit(rng);
      const StepGraphon g = block_graphon(cfg.limit, BlockMatrix(k, c));
      worst_equality = std::max(worst_equality, std::abs(holder_certificate(cfg.limit, cfg.params, g).gap));
    }
    checks.push_back(Check{"holder_certificate", worst_gap >= -1e-12 ? "pass" : "fail", worst_gap, -1e-12,
                           "smallest right-minus-left gap on random step graphons (must be >= bound)"});
    checks.push_back(bounded("holder_equality", worst_equality, 1e-9, "largest |gap| on block-constant graphons"));
  }

  {
    double worst_lower = -INFINITY, worst_upper = -INFINITY, worst_continuity = -INFINITY;
    for (int t = 0; t < trials; ++t) {
      const int per_block = std::max(1, 8 / k);
      const StepGraphon a = random_refining_graphon(cfg.limit, per_block, rng);
      const StepGraphon b = random_refining_graphon(cfg.limit, per_block, rng);
      const StepKernel d = difference(a, b);
      if (d.cells() > 14) continue;
      const double cut = cut_norm_exhaustive(d).value;
      const double colored = colored_cut_exhaustive(d).value;
      worst_lower = std::max(worst_lower, cut - colored);
      worst_upper = std::max(worst_upper, colored - k * k * cut);
      const std::vector<double> ta = triangle_density_tensor(a), tb = triangle_density_tensor(b);
      for (std::size_t i = 0; i < ta.size(); ++i)
        worst_continuity = std::max(worst_continuity, std::abs(ta[i] - tb[i]) - 3.0 * cut);
    }
    checks.push_back(bounded("cut_sandwich_lower", worst_lower, 1e-12, "max of cut norm minus colored cut distance"));
    checks.push_back(bounded("cut_sandwich_upper", worst_upper, 1e-12, "max of colored cut distance minus k^2 cut norm"));
    checks.push_back(bounded("density_continuity", worst_continuity, 1e-12,
                             "max of |triangle density gap| minus 3 cut norm"));
  }

  {
    double worst = -INFINITY;
    for (int t = 0; t < trials; ++t) {
      const int size = std::max(k, 5 + static_cast<int>(unit(rng) * 40));
      const FinitePartition partition = build_finite_partition(size, cfg.limit);
      const DiscretizationBounds bounds = discretization_bounds(partition);
      const StepGraphon finite = checkerboard(random_graph(partition, rng));
      const StepGraphon blind = color_blind(finite, cfg.limit);
      const std::vector<double> ef = edge_density_matrix(finite), eb = edge_density_matrix(blind);
      const std::vector<double> tf = triangle_density_tensor(finite), tb = triangle_density_tensor(blind);
      for (std::size_t i = 0; i < ef.size(); ++i) worst = std::max(worst, std::abs(ef[i] - eb[i]) - bounds.edge_bound);
      for (std::size_t i = 0; i < tf.size(); ++i)
        worst = std::max(worst, std::abs(tf[i] - tb[i]) - bounds.triangle_bound);
    }
    checks.push_back(bounded("discretization_bounds", worst, 1e-12,
                             "max of density change under recoloring minus its bound"));
  }
  for (const auto& c : checks)
    log << c.name << ": " << c.status << " (measured " << format_double(c.measured) << ", bound "
        << format_double(c.bound) << ")\n";
  return checks;
}

int cmd_certify(const ExperimentConfig& cfg, Session& session) {
  const std::vector<Check> checks = certify_checks(cfg, session.seed(), session.log());
  json list = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.status != "fail";
    list.push_back({{"name", c.name}, {"status", c.status}, {"measured", c.measured}, {"bound", c.bound}, {"detail", c.detail}});
  }
  json report = session.report_header("certify");
  report["checks"] = list;
  report["passed"] = ok;
  session.write_json("report.json", report);
  if (!ok) {
    for (const auto& c : checks)
      if (c.status == "fail") session.log() << "FAILED: " << c.name << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}

std::uint64_t command_seed(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "solve" || command == "sweep") return cfg.solve_seed();
  if (command == "sample") return cfg.sample_seed();
  if (command == "certify") return cfg.certify_seed();
  return cfg.seed;
}

}  // namespace

int run_command(const std::string& command, const ExperimentConfig& cfg, const RunContext& ctx) {
  std::ostream& log = ctx.log ? *ctx.log : std::cerr;
  try {
    Session session(cfg, ctx, command_seed(command, cfg));
    if (command == "exact") return cmd_exact(cfg, session);
    if (command == "solve") return cmd_solve(cfg, session);
    if (command == "sample") return cmd_sample(cfg, session);
    if (command == "sweep") return cmd_sweep(cfg, session);
    if (command == "distance") return cmd_distance(cfg, session);
    if (command == "certify") return cmd_certify(cfg, session);
    log << "unknown command \"" << command << "\"\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    log << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const NonConvergenceError& e) {
    log << "solver did not converge: " << e.what() << " (best residual " << format_double(e.best_residual())
        << ")\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    log << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Block edge-triangle random graph model toolkit"};
  std::string command, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "exact | solve | sample | sweep | distance | certify")
      ->required()
      ->check(CLI::IsMember({"exact", "solve", "sample", "sweep", "distance", "certify"}));
  app.add_option("--config,-c", config_path, "Configuration JSON")->required();
  app.add_option("--out,-o", out_dir, "Output directory");
  app.add_option("--seed", seed, "Override every seed in the configuration");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << '\n';
    return kExitConfig;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig cfg;
  try {
    cfg = parse_config(buffer.str());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (seed) cfg.override_seed(*seed);
  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.base_dir = fs::absolute(config_path).parent_path();
  ctx.log = &std::cerr;
  return run_command(command, cfg, ctx);
}

}  // namespace blockergm
