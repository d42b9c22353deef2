#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "blockergm/cli.hpp"
#include "blockergm/config.hpp"
#include "blockergm/errors.hpp"
#include "blockergm/io.hpp"
#include "blockergm/numeric.hpp"
#include "oracles.hpp"

using namespace blockergm;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("blockergm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string key_path_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_first_line(const std::string& text) { return text.substr(text.find('\n') + 1); }

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // metadata
  std::getline(in, line);  // header
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run(const std::string& command, const std::string& config, const fs::path& out) {
  std::ostringstream log;
  RunContext ctx;
  ctx.out_dir = out;
  ctx.base_dir = out;
  ctx.log = &log;
  return run_command(command, parse_config(config), ctx);
}

}  // namespace

TEST(Config, MinimalDefaults) {
  const ExperimentConfig cfg = parse_config(R"({"model": {"k": 1}})");
  EXPECT_EQ(cfg.params.k(), 1);
  EXPECT_EQ(cfg.params.alpha(0, 0, 0), 0.0);
  EXPECT_EQ(cfg.params.h(0, 0), 0.0);
  EXPECT_EQ(cfg.limit.weight(0), 1.0);
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_FALSE(cfg.solve.has_value());
  const ExperimentConfig s = parse_config(R"({"model": {"k": 1}, "solve": {}, "sample": {"n": 10}})");
  EXPECT_EQ(s.solve->tol, 1e-12);
  EXPECT_EQ(s.solve->max_iter, 100000);
  EXPECT_EQ(s.solve->starts, 13);
  EXPECT_EQ(s.sample->sweeps, 5000);
  EXPECT_EQ(s.sample->burn_in, 1000);
  EXPECT_EQ(s.sample->thin, 10);
  EXPECT_EQ(s.sample->chains, 4);
}

TEST(Config, ErrorsNameKeyPaths) {
  EXPECT_EQ(key_path_of(R"({"model": {"k": 2, "b": [0.5, 0.4]}})"), "model.b");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 2, "b": [1.0]}})"), "model.b");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 1}, "solve": {"bogus": 1}})"), "solve.bogus");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 1}, "extra": {}})"), "extra");
  EXPECT_EQ(key_path_of(R"({"solve": {}})"), "model");
  EXPECT_EQ(key_path_of(R"({"model": {}})"), "model.k");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 2, "h": [1, 2, 3, 4, 5]}})"), "model.h");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 2, "alpha": {"1,3,1": 1}}})"), "model.alpha.1,3,1");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 1}, "exact": {}})"), "exact.n");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 1}, "sweep": {"parameter": "h.1.2", "grid": [0]}})"), "sweep.parameter");
  EXPECT_EQ(key_path_of(R"({"model": {"k": 1}, "sample": {"n": 5, "sweeps": 10, "burn_in": 10}})"), "sample.sweeps");
  EXPECT_EQ(key_path_of("{not json"), "");
}

TEST(Config, SparseAlphaExpandsToDenseSymmetricTensor) {
  const ExperimentConfig cfg = parse_config(R"({"model": {"k": 2, "alpha": {"1,1,1": 2.0}}})");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) EXPECT_EQ(cfg.params.alpha(i, j, l), i + j + l == 0 ? 2.0 : 0.0);
  const ExperimentConfig back = parse_config(serialize_config(cfg));
  EXPECT_EQ(back, cfg);
  const ExperimentConfig mixed = parse_config(R"({"model": {"k": 2, "alpha": {"2,1,2": 0.5}, "h": {"1,2": -1}}})");
  EXPECT_EQ(mixed.params.alpha(0, 1, 1), 0.5);
  EXPECT_EQ(mixed.params.alpha(1, 1, 0), 0.5);
  EXPECT_EQ(mixed.params.h(1, 0), -1.0);
  EXPECT_EQ(mixed.params.h(0, 0), 0.0);
}

TEST(Config, CouplingFormsAgree) {
  const std::string upper = R"({"model": {"k": 2, "alpha": [1, 2, 3, 4], "h": [0.5, -1, 2]}})";
  const std::string sparse = R"({"model": {"k": 2, "alpha": {"1,1,1": 1, "1,1,2": 2, "1,2,2": 3, "2,2,2": 4},
                                              "h": {"1,1": 0.5, "1,2": -1, "2,2": 2}}})";
  const std::string nested = R"({"model": {"k": 2, "alpha": [[[1, 2], [2, 3]], [[2, 3], [3, 4]]],
                                              "h": [[0.5, -1], [-1, 2]]}})";
  const std::string flat = R"({"model": {"k": 2, "alpha": [1, 2, 2, 3, 2, 3, 3, 4], "h": [0.5, -1, -1, 2]}})";
  const ExperimentConfig a = parse_config(upper);
  EXPECT_EQ(a, parse_config(sparse));
  EXPECT_EQ(a, parse_config(nested));
  EXPECT_EQ(a, parse_config(flat));
  EXPECT_EQ(a.params.asymmetry_corrected(), 0.0);
}

TEST(Config, AsymmetricInputIsSymmetrizedAndRecorded) {
  const ExperimentConfig cfg = parse_config(R"({"model": {"k": 2, "h": [[0, 1], [3, 0]]}})");
  EXPECT_EQ(cfg.params.h(0, 1), 2.0);
  EXPECT_EQ(cfg.params.h(1, 0), 2.0);
  EXPECT_EQ(cfg.params.asymmetry_corrected(), 1.0);
}

TEST(Config, RoundTripOnRandomConfigs) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 4;
    json doc;
    const LimitPartition limit = oracle::random_limit(k, rng);
    std::vector<double> alpha(k * k * k), h(k * k);
    for (double& x : alpha) x = d(rng);
    for (double& x : h) x = d(rng);
    doc["model"] = {{"k", k}, {"b", limit.weights()}, {"alpha", alpha}, {"h", h}};
    doc["seed"] = rng();
    doc["solve"] = {{"s", d(rng)}, {"damping", 0.7}, {"seed", 5}};
    doc["exact"] = {{"n", 5}, {"cgf_s", {d(rng), d(rng)}}};
    doc["sample"] = {{"n", 50}, {"sweeps", 100}, {"burn_in", 10}, {"thin", 3}, {"chains", 2}};
    doc["sweep"] = {{"parameter", "h.1.1"}, {"grid", {0.0, 0.5}}};
    doc["distance"] = {{"a", "x.json"}, {"b", "y.txt"}, {"render_grid", 16}};
    doc["certify"] = {{"n", 4}, {"trials", 3}};
    const ExperimentConfig cfg = parse_config(doc.dump());
    const std::string text = serialize_config(cfg);
    EXPECT_EQ(parse_config(text), cfg);
    EXPECT_EQ(serialize_config(parse_config(text)), text);
    EXPECT_EQ(config_digest(parse_config(text)), config_digest(cfg));
  }
}

TEST(Config, SeedOverride) {
  ExperimentConfig cfg = parse_config(R"({"model": {"k": 1}, "seed": 3, "sample": {"n": 5, "seed": 9}})");
  EXPECT_EQ(cfg.sample_seed(), 9u);
  EXPECT_EQ(cfg.solve_seed(), 3u);
  cfg.override_seed(42);
  EXPECT_EQ(cfg.sample_seed(), 42u);
  EXPECT_EQ(cfg.certify_seed(), 42u);
}

TEST(EdgeList, RoundTripAndErrors) {
  std::mt19937_64 rng(82);
  const LimitPartition limit({0.4, 0.6});
  const ColoredGraph g = oracle::random_graph(build_finite_partition(12, limit), 0.4, rng);
  std::stringstream buffer;
  write_edge_list(buffer, g);
  EXPECT_EQ(read_edge_list(buffer, limit), g);
  std::istringstream commented("# header\nblocks: 1 2\n1 2  # edge\n\n2 3\n");
  const ColoredGraph c = read_edge_list(commented, limit);
  EXPECT_EQ(c.edge_count(), 2);
  std::istringstream loop("blocks: 1 1\n1 1\n");
  EXPECT_THROW(read_edge_list(loop, limit), std::invalid_argument);
  std::istringstream range("blocks: 1 1\n1 3\n");
  EXPECT_THROW(read_edge_list(range, limit), std::invalid_argument);
  std::istringstream missing("1 2\n");
  EXPECT_THROW(read_edge_list(missing, limit), std::invalid_argument);
  std::istringstream junk("blocks: 2 2\n1 2 3\n");
  EXPECT_THROW(read_edge_list(junk, limit), std::invalid_argument);
  std::istringstream wrong_k("blocks: 4\n");
  EXPECT_THROW(read_edge_list(wrong_k, limit), std::invalid_argument);
}

TEST(GraphonIo, JsonRoundTripAndGrid) {
  std::mt19937_64 rng(83);
  const LimitPartition limit({0.3, 0.7});
  const StepGraphon g = oracle::random_step_graphon(limit, 3, rng);
  std::stringstream buffer;
  write_graphon_json(buffer, g);
  const StepGraphon back = read_graphon_json(buffer);
  EXPECT_EQ(back.kernel().boundaries, g.kernel().boundaries);
  EXPECT_EQ(back.kernel().values, g.kernel().values);
  EXPECT_EQ(back.kernel().coloring, g.kernel().coloring);
  std::stringstream grid;
  write_grid_csv(grid, g, 8);
  std::string line;
  int rows = 0;
  while (std::getline(grid, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Run, SolveSingleBlockHalf) {
  TempDir dir;
  ASSERT_EQ(run("solve", R"({"model": {"k": 1}})", dir.path()), kExitOk);
  const json report = json::parse(slurp(dir.path() / "report.json"));
  EXPECT_EQ(report["solution"]["c_star"][0][0].get<double>(), 0.5);
  EXPECT_NEAR(report["solution"]["free_energy"].get<double>(), 0.5 * std::log(2.0), 1e-15);
  EXPECT_EQ(report["solution"]["regime"], "contractive");
  EXPECT_TRUE(report.contains("config_digest"));
  EXPECT_TRUE(report.contains("seed"));
  EXPECT_TRUE(fs::exists(dir.path() / "graphon_cstar.json"));
}

TEST(Run, ExactThreeVertices) {
  TempDir dir;
  ASSERT_EQ(run("exact", R"({"model": {"k": 1, "h": 1}, "exact": {"n": 3}})", dir.path()), kExitOk);
  const json report = json::parse(slurp(dir.path() / "report.json"));
  const double e = std::exp(1.0);
  EXPECT_NEAR(report["result"]["log_z"].get<double>(), std::log(1 + 3 * e + 3 * e * e + e * e * e), 1e-14);
  ASSERT_EQ(run("exact", R"({"model": {"k": 1, "h": 1}, "exact": {"n": 4}})", dir.path()), kExitOk);
  EXPECT_EQ(csv_rows(dir.path() / "exact.csv").size(), 2u);
}

TEST(Run, SweepOverShiftMatchesLogisticColumn) {
  TempDir dir;
  const std::string config = R"({"model": {"k": 2, "b": [0.3, 0.7], "h": [0.5, -1, 0.2]},
                                 "sweep": {"parameter": "s", "grid": [-1, -0.5, 0, 0.5, 1]}})";
  ASSERT_EQ(run("sweep", config, dir.path()), kExitOk);
  const auto rows = csv_rows(dir.path() / "sweep.csv");
  ASSERT_EQ(rows.size(), 5u);
  const ExperimentConfig cfg = parse_config(config);
  for (const auto& row : rows) {
    const double s = std::stod(row[0]);
    double expected = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expected += cfg.limit.weight(i) * cfg.limit.weight(j) * logistic(cfg.params.h(i, j) + s);
    EXPECT_NEAR(std::stod(row[2]), expected, 1e-12);
    EXPECT_EQ(row[4], "contractive");
  }
  // Determinism of CSV bodies.
  TempDir again;
  ASSERT_EQ(run("sweep", config, again.path()), kExitOk);
  EXPECT_EQ(without_first_line(slurp(dir.path() / "sweep.csv")), without_first_line(slurp(again.path() / "sweep.csv")));
}

TEST(Run, SampleTracesAreReproducible) {
  const std::string config = R"({"model": {"k": 2, "alpha": 1}, "sample": {"n": 30, "sweeps": 40, "burn_in": 10,
                                 "thin": 5, "chains": 2, "seed": 17}})";
  TempDir a, b;
  ASSERT_EQ(run("sample", config, a.path()), kExitOk);
  ASSERT_EQ(run("sample", config, b.path()), kExitOk);
  for (const char* name : {"trace_chain0.csv", "trace_chain1.csv"}) {
    EXPECT_EQ(without_first_line(slurp(a.path() / name)), without_first_line(slurp(b.path() / name)));
    EXPECT_EQ(csv_rows(a.path() / name).size(), 6u);
  }
  const json report = json::parse(slurp(a.path() / "report.json"));
  EXPECT_EQ(report["seed"].get<std::uint64_t>(), 17u);
}

TEST(Run, DistanceBetweenGraphAndGraphon) {
  TempDir dir;
  std::ofstream(dir.path() / "g.txt") << "blocks: 2 2\n1 2\n3 4\n1 3\n";
  std::ofstream(dir.path() / "h.json") << R"({"boundaries": [0, 0.5, 1], "values": [0.5, 0.2, 0.2, 0.5], "coloring": [1, 2]})";
  const std::string config = R"({"model": {"k": 2}, "distance": {"a": "g.txt", "b": "h.json", "render_grid": 4}})";
  ASSERT_EQ(run("distance", config, dir.path()), kExitOk);
  const json report = json::parse(slurp(dir.path() / "report.json"));
  const double cut = report["cut_norm"]["value"].get<double>();
  const double colored = report["colored_cut_distance"]["value"].get<double>();
  EXPECT_TRUE(report["cut_norm"]["exact"].get<bool>());
  EXPECT_GT(cut, 0.0);
  EXPECT_LE(cut, colored + 1e-15);
  EXPECT_LE(colored, 4 * cut + 1e-15);
  EXPECT_TRUE(fs::exists(dir.path() / "grid_a.csv"));
  const std::string bad = R"({"model": {"k": 2}, "distance": {"a": "missing.txt", "b": "h.json"}})";
  EXPECT_EQ(run("distance", bad, dir.path()), kExitConfig);
}

TEST(Run, CertifyPassesAndListsChecks) {
  TempDir dir;
  ASSERT_EQ(run("certify", R"({"model": {"k": 2, "b": [0.4, 0.6], "alpha": 1.2, "h": -0.3}, "certify": {"n": 5, "trials": 5}})",
                dir.path()),
            kExitOk);
  const json report = json::parse(slurp(dir.path() / "report.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_GE(report["checks"].size(), 8u);
  for (const auto& c : report["checks"]) EXPECT_NE(c["status"], "fail") << c["name"];
}

TEST(Run, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run("exact", R"({"model": {"k": 1}, "exact": {"n": 9}})", dir.path()), kExitResource);
  EXPECT_EQ(run("exact", R"({"model": {"k": 1}})", dir.path()), kExitConfig);
  EXPECT_EQ(run("sample", R"({"model": {"k": 3}, "sample": {"n": 2, "sweeps": 3, "burn_in": 1, "thin": 1}})", dir.path()),
            kExitConfig);
  EXPECT_EQ(run("solve", R"({"model": {"k": 2, "alpha": 1}, "solve": {"max_iter": 0}})", dir.path()), kExitNonConvergence);
  EXPECT_EQ(run("bogus", R"({"model": {"k": 1}})", dir.path()), kExitConfig);
}
