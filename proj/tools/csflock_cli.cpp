// Command-line front end; talks to the simulator only through the C API.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "csflock/csflock.h"

namespace {

// Statuses outside the 0..3 contract fold into it: caller mistakes count as
// configuration errors, anything the run itself hit as an integration error.
int exit_code(csf_status s) {
  switch (s) {
    case CSF_OK:
    case CSF_CLAIM_FAILED:
    case CSF_CONFIG_ERROR:
    case CSF_INTEGRATION_ERROR:
      return static_cast<int>(s);
    case CSF_INVALID_ARGUMENT:
    case CSF_IO_ERROR:
      return 2;
    default:
      return 3;
  }
}

int report(csf_status s) {
  if (s != CSF_OK && s != CSF_CLAIM_FAILED) std::cerr << "csflock: " << csf_status_name(s) << ": " << csf_last_error() << '\n';
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confined Cucker-Smale flocking: simulation and verification"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration (sweep file for 'sweep')");
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--seed", seed, "initial-condition seed (overrides ic.seed)");
  app.add_flag("--quiet", quiet, "suppress the summary on standard output");

  auto* simulate = app.add_subcommand("simulate", "integrate and write diagnostics");
  auto* verify = app.add_subcommand("verify", "integrate and check every claim");
  auto* sweep = app.add_subcommand("sweep", "verify a grid of parameters and seeds");
  auto* plot = app.add_subcommand("plot-data", "integrate and write whitespace plot columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  const std::uint64_t* seed_ptr = seed ? &*seed : nullptr;
  const int q = quiet ? 1 : 0;

  if (sweep->parsed()) {
    if (config_path.empty()) {
      std::cerr << "csflock: sweep needs --config\n";
      return 2;
    }
    csf_sweep* sw = nullptr;
    if (const auto s = csf_sweep_load(config_path.c_str(), &sw); s != CSF_OK) return report(s);
    const auto s = csf_run_sweep(sw, out, seed_ptr, q);
    csf_sweep_free(sw);
    return report(s);
  }

  csf_config* cfg = nullptr;
  const auto loaded = config_path.empty() ? csf_config_parse("", 0, &cfg) : csf_config_load(config_path.c_str(), &cfg);
  if (loaded != CSF_OK) return report(loaded);

  csf_status s = CSF_INTERNAL_ERROR;
  if (simulate->parsed()) {
    s = csf_run_simulate(cfg, out, seed_ptr, q);
  } else if (verify->parsed()) {
    s = csf_run_verify(cfg, out, seed_ptr, q);
  } else if (plot->parsed()) {
    s = csf_run_plot_data(cfg, out, seed_ptr, q);
  }
  csf_config_free(cfg);
  return report(s);
}
