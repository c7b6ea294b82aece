#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csflock/integrator.hpp"
#include "csflock/scenario.hpp"
#include "csflock/verification.hpp"

namespace csflock {

struct KernelConfig {
  KernelFamily family = KernelFamily::PowerLaw;
  double H = 1.0;
  double beta = 0.25;
};

struct PotentialConfig {
  double ell = 1.0;
  double theta = 1.0;
};

struct GeometryConfig {
  GeometryKind variant = GeometryKind::HalfLine;
  double a = 0.0;  // interval only
  double b = 0.0;
};

struct IntegratorConfig {
  StepControl control{};
  double sample_every = 0.1;
  double t_end = 200.0;
};

struct OutputConfig {
  std::string directory = "csflock_out";
  std::vector<std::string> formats{"csv"};  // subset of {"csv", "plot"}

  bool wants(std::string_view format) const;
};

struct RunConfig {
  KernelConfig kernel;
  PotentialConfig potential;
  GeometryConfig geometry;
  IntegratorConfig integrator;
  Thresholds thresholds;
  InitialBox ic;
  OutputConfig output;

  ModelSpec model() const;
  IntegrationPlan plan() const;
  // Initial state at t = 0 drawn from the ic box.
  FlockState initial_state() const;
};

/// JSON text with one object per section. Missing keys take their defaults,
/// an empty document yields the default configuration. Throws ConfigError
/// naming the offending key on unknown keys, type mismatches or invariant
/// violations.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical JSON with every key spelled out; parse_config(serialize_config(c))
/// reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

/// Re-runs every invariant check on an already built config (after overrides).
void validate_config(const RunConfig& cfg);

struct SweepAxis {
  std::string key;                 // dotted path such as "kernel.beta"
  std::vector<std::string> values;  // JSON literals, kept verbatim
};

struct SweepRun {
  std::size_t index = 0;
  std::vector<std::string> values;  // one per axis
  std::uint64_t seed = 0;
  RunConfig config;
  std::string error;  // non-empty when this parameter combination is invalid
};

struct SweepConfig {
  std::string base_text;  // canonical JSON of the base section
  std::vector<SweepAxis> axes;
  std::vector<std::uint64_t> seeds;
  unsigned parallelism = 1;

  /// Cross product of the axes and seeds, ordered by axis values
  /// (numbers numerically, strings lexically, first axis most significant)
  /// and then by seed.
  std::vector<SweepRun> expand() const;
};

inline constexpr std::size_t kMaxSweepRuns = 10000;

SweepConfig parse_sweep_config(std::string_view text);
SweepConfig load_sweep_config(const std::string& path);

}  // namespace csflock
