#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "csflock/config.hpp"

namespace csflock {

enum ExitCode : int {
  kExitOk = 0,
  kExitClaimFailed = 1,
  kExitConfigError = 2,
  kExitIntegrationError = 3,
};

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides output.directory
  std::optional<std::uint64_t> seed;   // overrides ic.seed (sweeps: replaces the seed list)
  bool quiet = false;
};

/// Applies the overrides in `opt` and re-validates.
RunConfig resolve(RunConfig cfg, const RunOptions& opt);

/// Integrates the configured scenario; a failure is recorded, not thrown.
Trajectory simulate(const RunConfig& cfg);
/// Dispatches on the geometry.
TheoremReport verify(const Trajectory& traj, const Thresholds& th);

/// The subcommands. Each writes into one run directory holding config.json
/// plus its artifacts and returns an ExitCode.
int run_simulate(const RunConfig& cfg, const RunOptions& opt);
int run_verify(const RunConfig& cfg, const RunOptions& opt);
int run_plot_data(const RunConfig& cfg, const RunOptions& opt);
int run_sweep(const SweepConfig& sweep, const RunOptions& opt);

/// Rows of the sweep table, ordered as SweepConfig::expand().
std::string sweep_table(const SweepConfig& sweep, unsigned parallelism);

}  // namespace csflock
