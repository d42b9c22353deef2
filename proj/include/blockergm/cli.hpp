#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "blockergm/config.hpp"

namespace blockergm {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitResource = 3,
  kExitInvariant = 4,
  kExitNonConvergence = 5,
};

struct RunContext {
  /// Reports and tables are written here; created if missing.
  std::filesystem::path out_dir = ".";
  /// Relative input paths in the config are resolved against this directory.
  std::filesystem::path base_dir = ".";
  std::ostream* log = nullptr;
};

/// Runs one of exact, solve, sample, sweep, distance, certify and maps failures to exit
/// codes: config or input errors 2, enumeration cap 3, failed invariant checks 4,
/// solver non-convergence 5.
int run_command(const std::string& command, const ExperimentConfig& cfg, const RunContext& ctx);

/// Entry point of the command-line tool: `<command> --config FILE --out DIR [--seed N]`.
int run_cli(int argc, char** argv);

}  // namespace blockergm
