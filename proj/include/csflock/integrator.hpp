#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csflock/dynamics.hpp"
#include "csflock/error.hpp"
#include "csflock/observables.hpp"

namespace csflock {

struct StepControl {
  double dt_init = 1e-3;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  double wall_safety = 0.25;  // dt <= wall_safety * wall distance / (max|v| + 1)

  void validate() const;
};

struct IntegrationFailure {
  FailureKind kind = FailureKind::StepUnderflow;
  double time = 0.0;
  std::string message;
};

/// Samples of one run. `states[k]` and `records[k]` belong to
/// `sample_times[k]`; the first sample is the initial state.
struct Trajectory {
  ModelSpec model;
  double horizon = 0.0;  // requested end time
  std::vector<double> sample_times;
  std::vector<FlockState> states;
  std::vector<DiagnosticsRecord> records;
  // Budget integrals up to each sample, accumulated over every accepted step.
  std::vector<RunningIntegrals> integrals;
  // Smallest wall distance over every accepted step, not only samples.
  double min_wall_distance = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::optional<IntegrationFailure> failure;

  bool complete() const noexcept { return !failure.has_value(); }
  const FlockState& final_state() const { return states.back(); }
};

struct EmbeddedStep {
  FlockState state;
  double error_estimate = 0.0;  // max-norm of the embedded difference
  double scaled_error = 0.0;    // max_i |e_i| / (abs_tol + rel_tol max(|y_i|, |y_new_i|))
};

/// One Runge-Kutta-Fehlberg 4(5) step, propagating the fourth-order solution.
/// Returns nullopt when an internal stage leaves the open domain (the caller
/// should retry with a smaller dt).
std::optional<EmbeddedStep> step_embedded(const ModelSpec& model, const FlockState& state, double dt,
                                          const StepControl& control = {});

/// Adaptive integration with PI step-size control. Steps are clipped to land
/// on every sample time t0 + k * sample_every (and on t_end). Throws
/// IntegrationError on failure.
Trajectory integrate(const ModelSpec& model, const FlockState& s0, double t_end, const StepControl& control,
                     double sample_every);

/// As integrate(), but a failure is recorded in Trajectory::failure and the
/// samples gathered so far are returned.
Trajectory integrate_partial(const ModelSpec& model, const FlockState& s0, double t_end,
                             const StepControl& control, double sample_every);

/// The embedded pair at a fixed step (no error control); used to measure the
/// convergence order. dt must divide sample_every.
Trajectory integrate_fixed(const ModelSpec& model, const FlockState& s0, double t_end, double dt,
                           double sample_every);

/// Classic fixed-step RK4, an independent cross-check oracle.
Trajectory reference_integrate(const ModelSpec& model, const FlockState& s0, double t_end, double dt_fixed,
                               double sample_every = 0.1);

}  // namespace csflock
