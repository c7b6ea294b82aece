#include "csflock/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace csflock {

const char* to_string(FailureKind kind) noexcept {
  switch (kind) {
    case FailureKind::WallContact: return "wall_contact";
    case FailureKind::StepUnderflow: return "step_underflow";
    case FailureKind::NonFinite: return "non_finite";
  }
  return "unknown";
}

void StepControl::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(abs_tol) || !positive(rel_tol)) throw InputError("integrator tolerances must be positive");
  if (!positive(dt_min) || !positive(dt_init) || !positive(dt_max))
    throw InputError("integrator step bounds must be positive");
  if (!(dt_min <= dt_init && dt_init <= dt_max)) throw InputError("integrator needs dt_min <= dt_init <= dt_max");
  if (!(wall_safety > 0.0 && wall_safety < 1.0)) throw InputError("integrator wall_safety must lie in (0, 1)");
}

namespace {

// Runge-Kutta-Fehlberg 4(5).
constexpr std::array<std::array<double, 5>, 6> kA = {{
    {0, 0, 0, 0, 0},
    {1.0 / 4.0, 0, 0, 0, 0},
    {3.0 / 32.0, 9.0 / 32.0, 0, 0, 0},
    {1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0, 0},
    {439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0},
    {-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0},
}};
constexpr std::array<double, 6> kB4 = {25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0};
constexpr std::array<double, 6> kB5 = {16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0,
                                       2.0 / 55.0};

// Reusable stage storage for one model/agent count.
class Stepper {
 public:
  explicit Stepper(const ModelSpec& model) : model_(model), n_(model.n_agents) {
    for (auto& k : kx_) k.resize(n_);
    for (auto& k : kv_) k.resize(n_);
    sx_.resize(n_);
    sv_.resize(n_);
  }

  // Returns false if a stage position leaves the open domain.
  bool fehlberg(const FlockState& s, double dt, const StepControl& c, EmbeddedStep& out) {
    for (std::size_t stage = 0; stage < 6; ++stage) {
      for (std::size_t i = 0; i < n_; ++i) {
        double ax = 0.0, av = 0.0;
        for (std::size_t j = 0; j < stage; ++j) {
          ax += kA[stage][j] * kx_[j][i];
          av += kA[stage][j] * kv_[j][i];
        }
        sx_[i] = s.x[i] + dt * ax;
        sv_[i] = s.v[i] + dt * av;
      }
      if (!evaluate(stage)) return false;
    }
    out.state.t = s.t + dt;
    out.state.x.resize(n_);
    out.state.v.resize(n_);
    double err_max = 0.0, scaled = 0.0;
    auto update = [&](double y0, const auto& k, std::size_t i, double& y1) {
      double low = 0.0, diff = 0.0;
      for (std::size_t j = 0; j < 6; ++j) {
        low += kB4[j] * k[j][i];
        diff += (kB5[j] - kB4[j]) * k[j][i];
      }
      y1 = y0 + dt * low;
      const double e = std::abs(dt * diff);
      err_max = std::max(err_max, e);
      const double sc = c.abs_tol + c.rel_tol * std::max(std::abs(y0), std::abs(y1));
      scaled = std::max(scaled, e / sc);
    };
    for (std::size_t i = 0; i < n_; ++i) {
      update(s.x[i], kx_, i, out.state.x[i]);
      update(s.v[i], kv_, i, out.state.v[i]);
    }
    out.error_estimate = err_max;
    out.scaled_error = scaled;
    return true;
  }

  bool rk4(const FlockState& s, double dt, FlockState& out) {
    static constexpr std::array<double, 4> c = {0.0, 0.5, 0.5, 1.0};
    static constexpr std::array<double, 4> b = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    for (std::size_t stage = 0; stage < 4; ++stage) {
      for (std::size_t i = 0; i < n_; ++i) {
        sx_[i] = stage == 0 ? s.x[i] : s.x[i] + dt * c[stage] * kx_[stage - 1][i];
        sv_[i] = stage == 0 ? s.v[i] : s.v[i] + dt * c[stage] * kv_[stage - 1][i];
      }
      if (!evaluate(stage)) return false;
    }
    out.t = s.t + dt;
    out.x.resize(n_);
    out.v.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double ax = 0.0, av = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        ax += b[j] * kx_[j][i];
        av += b[j] * kv_[j][i];
      }
      out.x[i] = s.x[i] + dt * ax;
      out.v[i] = s.v[i] + dt * av;
    }
    return true;
  }

 private:
  bool evaluate(std::size_t stage) {
    for (double xi : sx_)
      if (!model_.geometry.contains(xi)) return false;
    kx_[stage] = sv_;
    accelerations(model_, sx_, sv_, kv_[stage]);
    return true;
  }

  const ModelSpec& model_;
  std::size_t n_;
  std::array<std::vector<double>, 6> kx_, kv_;
  std::vector<double> sx_, sv_;
};

bool all_finite(const FlockState& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.v[i])) return false;
  return true;
}

double min_wall_distance(const ModelSpec& m, const FlockState& s) {
  double d = std::numeric_limits<double>::infinity();
  for (double xi : s.x) d = std::min(d, m.geometry.wall_distance(xi));
  return d;
}

double max_speed(const FlockState& s) {
  double v = 0.0;
  for (double vi : s.v) v = std::max(v, std::abs(vi));
  return v;
}

void check_request(const ModelSpec& model, const FlockState& s0, double t_end, double sample_every) {
  validate_state(model, s0);
  if (!(std::isfinite(t_end) && t_end > s0.t)) throw InputError("t_end must be finite and after the initial time");
  if (!(std::isfinite(sample_every) && sample_every > 0.0)) throw InputError("sample_every must be positive");
}

void push_sample(Trajectory& tr, const FlockState& s, double g, const RunningIntegrals& acc) {
  tr.sample_times.push_back(s.t);
  tr.states.push_back(s);
  tr.records.push_back(diagnostics(tr.model, s, g));
  tr.integrals.push_back(acc);
}

// Running budget integrals, advanced once per accepted step.
class Accumulator {
 public:
  Accumulator(const ModelSpec& model, const FlockState& s0) : model_(model), last_(integrands(model, s0)) {}

  void step(const FlockState& s, double dt) {
    const BudgetIntegrands now = integrands(model_, s);
    total_ += step_integral(last_, now, dt);
    last_ = now;
  }
  const RunningIntegrals& total() const noexcept { return total_; }

 private:
  const ModelSpec& model_;
  BudgetIntegrands last_;
  RunningIntegrals total_{};
};

// Sample grid t0 + k * every, with the final sample at exactly t_end.
class SampleClock {
 public:
  SampleClock(double t0, double t_end, double every) : t0_(t0), t_end_(t_end), every_(every) {}

  double next() const {
    const double t = t0_ + static_cast<double>(k_) * every_;
    return (t >= t_end_ - 1e-9 * every_) ? t_end_ : t;
  }
  void advance() { ++k_; }

 private:
  double t0_, t_end_, every_;
  std::size_t k_ = 1;
};

}  // namespace

std::optional<EmbeddedStep> step_embedded(const ModelSpec& model, const FlockState& state, double dt,
                                          const StepControl& control) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw InputError("step size must be positive");
  validate_state(model, state);
  Stepper stepper(model);
  EmbeddedStep out;
  if (!stepper.fehlberg(state, dt, control, out)) return std::nullopt;
  return out;
}

Trajectory integrate_partial(const ModelSpec& model, const FlockState& s0, double t_end,
                             const StepControl& control, double sample_every) {
  control.validate();
  check_request(model, s0, t_end, sample_every);

  Trajectory tr;
  tr.model = model;
  tr.horizon = t_end;
  const double g = total_energy(model, s0);
  Accumulator acc(model, s0);
  push_sample(tr, s0, g, acc.total());
  tr.min_wall_distance = min_wall_distance(model, s0);

  Stepper stepper(model);
  SampleClock clock(s0.t, t_end, sample_every);
  FlockState s = s0;
  EmbeddedStep trial;
  double h = control.dt_init;
  double err_prev = 1e-4;
  bool last_reject_domain = false;
  bool just_rejected = false;

  auto fail = [&](FailureKind kind, const std::string& why) {
    std::ostringstream msg;
    msg << why << " at t = " << s.t;
    tr.failure = IntegrationFailure{kind, s.t, msg.str()};
  };

  while (s.t < t_end) {
    const double cap = control.wall_safety * min_wall_distance(model, s) / (max_speed(s) + 1.0);
    double hh = std::min({h, control.dt_max, cap});
    const double target = clock.next();
    const double gap = target - s.t;
    bool landing = false;
    if (gap <= 1.01 * hh) {
      hh = gap;
      landing = true;
    }
    if (!landing && hh < control.dt_min) {
      if (cap < control.dt_min || last_reject_domain)
        fail(FailureKind::WallContact, "step size fell below dt_min while approaching a wall");
      else
        fail(FailureKind::StepUnderflow, "step size fell below dt_min");
      break;
    }
    if (landing && hh < control.dt_min && last_reject_domain) {
      fail(FailureKind::WallContact, "step size fell below dt_min while approaching a wall");
      break;
    }

    if (!stepper.fehlberg(s, hh, control, trial)) {
      ++tr.rejected_steps;
      h = 0.5 * hh;
      last_reject_domain = true;
      just_rejected = true;
      continue;
    }
    const double err = trial.scaled_error;
    if (!(err <= 1.0)) {
      ++tr.rejected_steps;
      if (std::isnan(err)) {
        h = 0.5 * hh;
      } else {
        h = hh * std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
      last_reject_domain = false;
      just_rejected = true;
      continue;
    }

    const double t_prev = s.t;
    s = std::move(trial.state);
    trial.state = FlockState{};
    if (landing) s.t = target;
    ++tr.accepted_steps;
    if (!all_finite(s)) {
      fail(FailureKind::NonFinite, "non-finite state");
      break;
    }
    acc.step(s, s.t - t_prev);
    tr.min_wall_distance = std::min(tr.min_wall_distance, min_wall_distance(model, s));

    // PI controller (exponents 0.7/5 and 0.4/5 for a fifth-order error estimate).
    const double e = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
    fac = std::clamp(fac, 0.2, 5.0);
    if (just_rejected) fac = std::min(fac, 1.0);
    const bool clipped = hh < h;
    if (!(clipped && fac >= 1.0)) h = hh * fac;
    h = std::min(h, control.dt_max);
    err_prev = std::max(err, 1e-4);
    last_reject_domain = false;
    just_rejected = false;

    if (landing) {
      push_sample(tr, s, g, acc.total());
      clock.advance();
    }
  }
  return tr;
}

Trajectory integrate(const ModelSpec& model, const FlockState& s0, double t_end, const StepControl& control,
                     double sample_every) {
  Trajectory tr = integrate_partial(model, s0, t_end, control, sample_every);
  if (tr.failure) throw IntegrationError(tr.failure->kind, tr.failure->time, tr.failure->message);
  return tr;
}

namespace {

template <class StepFn>
Trajectory fixed_run(const ModelSpec& model, const FlockState& s0, double t_end, double dt, double sample_every,
                     StepFn&& step) {
  check_request(model, s0, t_end, sample_every);
  if (!(std::isfinite(dt) && dt > 0.0)) throw InputError("fixed step must be positive");
  const double per_sample = sample_every / dt;
  const auto steps_per_sample = static_cast<std::size_t>(std::llround(per_sample));
  if (steps_per_sample == 0 || std::abs(per_sample - static_cast<double>(steps_per_sample)) > 1e-9 * per_sample)
    throw InputError("fixed step must divide sample_every");
  const double total = (t_end - s0.t) / dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(total));
  if (std::abs(total - static_cast<double>(n_steps)) > 1e-9 * total)
    throw InputError("fixed step must divide the integration span");

  Trajectory tr;
  tr.model = model;
  tr.horizon = t_end;
  const double g = total_energy(model, s0);
  Accumulator acc(model, s0);
  push_sample(tr, s0, g, acc.total());
  tr.min_wall_distance = min_wall_distance(model, s0);

  Stepper stepper(model);
  FlockState s = s0, next;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    if (!step(stepper, s, next)) {
      throw IntegrationError(FailureKind::WallContact, s.t, "fixed step left the open domain");
    }
    const double t_prev = s.t;
    std::swap(s, next);
    s.t = s0.t + static_cast<double>(k) * dt;
    if (!all_finite(s)) throw IntegrationError(FailureKind::NonFinite, s.t, "non-finite state");
    acc.step(s, s.t - t_prev);
    ++tr.accepted_steps;
    tr.min_wall_distance = std::min(tr.min_wall_distance, min_wall_distance(model, s));
    if (k % steps_per_sample == 0 || k == n_steps) push_sample(tr, s, g, acc.total());
  }
  return tr;
}

}  // namespace

Trajectory integrate_fixed(const ModelSpec& model, const FlockState& s0, double t_end, double dt,
                           double sample_every) {
  const StepControl loose{};
  EmbeddedStep scratch;
  return fixed_run(model, s0, t_end, dt, sample_every, [&](Stepper& st, const FlockState& s, FlockState& out) {
    if (!st.fehlberg(s, dt, loose, scratch)) return false;
    out = std::move(scratch.state);
    scratch.state = FlockState{};
    return true;
  });
}

Trajectory reference_integrate(const ModelSpec& model, const FlockState& s0, double t_end, double dt_fixed,
                               double sample_every) {
  return fixed_run(model, s0, t_end, dt_fixed, sample_every,
                   [&](Stepper& st, const FlockState& s, FlockState& out) { return st.rk4(s, dt_fixed, out); });
}

}  // namespace csflock
