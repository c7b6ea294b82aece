#include "csflock/csflock.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "csflock/runner.hpp"

struct csf_config {
  csflock::RunConfig cfg;
};

struct csf_sweep {
  csflock::SweepConfig sweep;
};

struct csf_simulation {
  csflock::ModelSpec model;
  csflock::StepControl control;
  csflock::FlockState state;
  double initial_energy = 0.0;
};

namespace {

thread_local std::string g_last_error;

csf_status fail(csf_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps whatever the core throws onto a status code.
template <class Fn>
csf_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    return fn();
  } catch (const csflock::ConfigError& e) {
    return fail(CSF_CONFIG_ERROR, e.what());
  } catch (const csflock::IntegrationError& e) {
    return fail(CSF_INTEGRATION_ERROR, e.what());
  } catch (const csflock::DomainError& e) {
    return fail(CSF_DOMAIN_ERROR, e.what());
  } catch (const csflock::InputError& e) {
    return fail(CSF_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(CSF_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CSF_INTERNAL_ERROR, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(CSF_IO_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(CSF_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(CSF_INTERNAL_ERROR, "unknown exception");
  }
}

csf_status from_exit(int code) {
  switch (code) {
    case csflock::kExitOk: return CSF_OK;
    case csflock::kExitClaimFailed: return fail(CSF_CLAIM_FAILED, "at least one claim failed");
    case csflock::kExitConfigError: return fail(CSF_CONFIG_ERROR, "configuration error");
    default: return fail(CSF_INTEGRATION_ERROR, "integration failed");
  }
}

csflock::RunOptions options(const char* out_dir, const uint64_t* seed, int quiet) {
  csflock::RunOptions opt;
  if (out_dir) opt.out_dir = out_dir;
  if (seed) opt.seed = *seed;
  opt.quiet = quiet != 0;
  return opt;
}

csflock::CommunicationKernel make_kernel(int family, double H, double beta) {
  if (family == 0) return csflock::CommunicationKernel::power_law(H, beta);
  if (family == 1) return csflock::CommunicationKernel::constant(H);
  throw csflock::InputError("kernel family must be 0 (power law) or 1 (constant)");
}

}  // namespace

extern "C" {

const char* csf_version(void) { return "1.0.0"; }

const char* csf_last_error(void) { return g_last_error.c_str(); }

const char* csf_status_name(csf_status status) {
  switch (status) {
    case CSF_OK: return "ok";
    case CSF_CLAIM_FAILED: return "claim_failed";
    case CSF_CONFIG_ERROR: return "config_error";
    case CSF_INTEGRATION_ERROR: return "integration_error";
    case CSF_INVALID_ARGUMENT: return "invalid_argument";
    case CSF_DOMAIN_ERROR: return "domain_error";
    case CSF_IO_ERROR: return "io_error";
    case CSF_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

csf_status csf_config_parse(const char* text, size_t length, csf_config** out) {
  return guarded([&] {
    if (!out || (!text && length)) return fail(CSF_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto cfg = csflock::parse_config(std::string_view(text ? text : "", length));
    *out = new csf_config{std::move(cfg)};
    return CSF_OK;
  });
}

csf_status csf_config_load(const char* path, csf_config** out) {
  return guarded([&] {
    if (!out || !path) return fail(CSF_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto cfg = csflock::load_config(path);
    *out = new csf_config{std::move(cfg)};
    return CSF_OK;
  });
}

void csf_config_free(csf_config* config) { delete config; }

csf_status csf_config_set_seed(csf_config* config, uint64_t seed) {
  if (!config) return fail(CSF_INVALID_ARGUMENT, "null config");
  config->cfg.ic.seed = seed;
  return CSF_OK;
}

csf_status csf_config_set_output_dir(csf_config* config, const char* directory) {
  return guarded([&] {
    if (!config || !directory) return fail(CSF_INVALID_ARGUMENT, "null argument");
    if (!*directory) return fail(CSF_CONFIG_ERROR, "output.directory: must not be empty");
    config->cfg.output.directory = directory;
    return CSF_OK;
  });
}

csf_status csf_config_serialize(const csf_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    if (!config || !needed || (!buffer && capacity)) return fail(CSF_INVALID_ARGUMENT, "null argument");
    const std::string text = csflock::serialize_config(config->cfg);
    *needed = text.size();
    if (capacity == 0) return CSF_OK;
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
    return n == text.size() ? CSF_OK : fail(CSF_INVALID_ARGUMENT, "buffer too small");
  });
}

csf_status csf_sweep_parse(const char* text, size_t length, csf_sweep** out) {
  return guarded([&] {
    if (!out || (!text && length)) return fail(CSF_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto sw = csflock::parse_sweep_config(std::string_view(text ? text : "", length));
    *out = new csf_sweep{std::move(sw)};
    return CSF_OK;
  });
}

csf_status csf_sweep_load(const char* path, csf_sweep** out) {
  return guarded([&] {
    if (!out || !path) return fail(CSF_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto sw = csflock::load_sweep_config(path);
    *out = new csf_sweep{std::move(sw)};
    return CSF_OK;
  });
}

void csf_sweep_free(csf_sweep* sweep) { delete sweep; }

csf_status csf_sweep_run_count(const csf_sweep* sweep, size_t* count) {
  if (!sweep || !count) return fail(CSF_INVALID_ARGUMENT, "null argument");
  size_t n = sweep->sweep.seeds.size();
  for (const auto& a : sweep->sweep.axes) n *= a.values.size();
  *count = n;
  return CSF_OK;
}

csf_status csf_run_simulate(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet) {
  return guarded([&] {
    if (!config) return fail(CSF_INVALID_ARGUMENT, "null config");
    return from_exit(csflock::run_simulate(config->cfg, options(out_dir, seed, quiet)));
  });
}

csf_status csf_run_verify(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet) {
  return guarded([&] {
    if (!config) return fail(CSF_INVALID_ARGUMENT, "null config");
    return from_exit(csflock::run_verify(config->cfg, options(out_dir, seed, quiet)));
  });
}

csf_status csf_run_plot_data(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet) {
  return guarded([&] {
    if (!config) return fail(CSF_INVALID_ARGUMENT, "null config");
    return from_exit(csflock::run_plot_data(config->cfg, options(out_dir, seed, quiet)));
  });
}

csf_status csf_run_sweep(const csf_sweep* sweep, const char* out_dir, const uint64_t* seed, int quiet) {
  return guarded([&] {
    if (!sweep) return fail(CSF_INVALID_ARGUMENT, "null sweep");
    return from_exit(csflock::run_sweep(sweep->sweep, options(out_dir, seed, quiet)));
  });
}

csf_status csf_simulation_create(const csf_config* config, csf_simulation** out) {
  return guarded([&] {
    if (!config || !out) return fail(CSF_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto sim = std::make_unique<csf_simulation>();
    sim->model = config->cfg.model();
    sim->control = config->cfg.integrator.control;
    sim->state = config->cfg.initial_state();
    sim->initial_energy = csflock::total_energy(sim->model, sim->state);
    *out = sim.release();
    return CSF_OK;
  });
}

csf_status csf_simulation_create_from_state(const csf_config* config, const double* x, const double* v, size_t n,
                                            csf_simulation** out) {
  return guarded([&] {
    if (!config || !out || !x || !v || n == 0) return fail(CSF_INVALID_ARGUMENT, "null argument or empty state");
    *out = nullptr;
    auto sim = std::make_unique<csf_simulation>();
    sim->model = config->cfg.model();
    sim->model.n_agents = n;
    sim->control = config->cfg.integrator.control;
    sim->state.x.assign(x, x + n);
    sim->state.v.assign(v, v + n);
    sim->initial_energy = csflock::total_energy(sim->model, sim->state);
    *out = sim.release();
    return CSF_OK;
  });
}

void csf_simulation_free(csf_simulation* sim) { delete sim; }

csf_status csf_simulation_advance(csf_simulation* sim, double t_end) {
  return guarded([&] {
    if (!sim) return fail(CSF_INVALID_ARGUMENT, "null simulation");
    if (!std::isfinite(t_end) || t_end <= sim->state.t) return fail(CSF_INVALID_ARGUMENT, "t_end must lie ahead");
    const auto traj =
        csflock::integrate_partial(sim->model, sim->state, t_end, sim->control, t_end - sim->state.t);
    sim->state = traj.final_state();
    if (traj.failure) return fail(CSF_INTEGRATION_ERROR, traj.failure->message);
    return CSF_OK;
  });
}

csf_status csf_simulation_size(const csf_simulation* sim, size_t* n) {
  if (!sim || !n) return fail(CSF_INVALID_ARGUMENT, "null argument");
  *n = sim->state.size();
  return CSF_OK;
}

csf_status csf_simulation_time(const csf_simulation* sim, double* t) {
  if (!sim || !t) return fail(CSF_INVALID_ARGUMENT, "null argument");
  *t = sim->state.t;
  return CSF_OK;
}

csf_status csf_simulation_state(const csf_simulation* sim, double* x, double* v, size_t n) {
  if (!sim || !x || !v) return fail(CSF_INVALID_ARGUMENT, "null argument");
  if (n != sim->state.size()) return fail(CSF_INVALID_ARGUMENT, "array length does not match the agent count");
  std::copy(sim->state.x.begin(), sim->state.x.end(), x);
  std::copy(sim->state.v.begin(), sim->state.v.end(), v);
  return CSF_OK;
}

csf_status csf_simulation_diagnostics(const csf_simulation* sim, double* row, size_t length) {
  return guarded([&] {
    if (!sim || !row) return fail(CSF_INVALID_ARGUMENT, "null argument");
    if (length < CSF_DIAGNOSTICS_COLUMNS) return fail(CSF_INVALID_ARGUMENT, "row buffer shorter than 16");
    const auto values = csflock::as_row(csflock::diagnostics(sim->model, sim->state, sim->initial_energy));
    std::copy(values.begin(), values.end(), row);
    return CSF_OK;
  });
}

const char* csf_diagnostics_column_name(size_t index) {
  return index < csflock::kDiagnosticsColumns.size() ? csflock::kDiagnosticsColumns[index].data() : nullptr;
}

csf_status csf_kernel_eval(int family, double H, double beta, double r, double* out) {
  return guarded([&] {
    if (!out) return fail(CSF_INVALID_ARGUMENT, "null output");
    *out = make_kernel(family, H, beta).eval(r);
    return CSF_OK;
  });
}

csf_status csf_kernel_primitive(int family, double H, double beta, double D, double* out) {
  return guarded([&] {
    if (!out) return fail(CSF_INVALID_ARGUMENT, "null output");
    *out = make_kernel(family, H, beta).primitive(D);
    return CSF_OK;
  });
}

csf_status csf_wall_potential(double ell, double theta, double x, double* U, double* F, double* U2) {
  return guarded([&] {
    if (!std::isfinite(x)) return fail(CSF_INVALID_ARGUMENT, "x must be finite");
    const csflock::WallPotential w(ell, theta);
    if (U) *U = w.value(x);
    if (F) *F = w.force(x);
    if (U2) *U2 = w.curvature(x);
    return CSF_OK;
  });
}

}  // extern "C"
