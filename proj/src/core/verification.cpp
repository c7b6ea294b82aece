#include "csflock/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csflock {

void Thresholds::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(align_eps)) throw InputError("thresholds.align_eps must be positive");
  if (!positive(settle_eps)) throw InputError("thresholds.settle_eps must be positive");
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw InputError("thresholds.tail_fraction must lie in (0, 1)");
  if (fit_min_points < 10) throw InputError("thresholds.fit_min_points must be at least 10");
  if (!positive(budget_tol)) throw InputError("thresholds.budget_tol must be positive");
  if (!(fit_min_r_squared >= 0.0 && fit_min_r_squared <= 1.0))
    throw InputError("thresholds.fit_min_r_squared must lie in [0, 1]");
}

const char* to_string(ClaimStatus s) noexcept {
  switch (s) {
    case ClaimStatus::Pass: return "pass";
    case ClaimStatus::Fail: return "fail";
    case ClaimStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

const char* to_string(SettleMode m) noexcept {
  switch (m) {
    case SettleMode::Settled: return "settled";
    case SettleMode::Drift: return "drift";
    case SettleMode::Unsettled: return "unsettled";
  }
  return "unknown";
}

bool TheoremReport::all_pass() const noexcept {
  return std::none_of(claims.begin(), claims.end(), [](const Claim& c) { return c.status == ClaimStatus::Fail; });
}

const Claim* TheoremReport::find(std::string_view name) const noexcept {
  for (const auto& c : claims)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::size_t tail_begin(const Trajectory& traj, double fraction) {
  const auto& t = traj.sample_times;
  const double start = t.back() - fraction * (t.back() - t.front());
  const auto it = std::lower_bound(t.begin(), t.end(), start);
  return static_cast<std::size_t>(it - t.begin());
}

ClaimStatus status_of(bool pass) { return pass ? ClaimStatus::Pass : ClaimStatus::Fail; }

Claim budget_claim(const BudgetCheck& c, std::string anchor) {
  return Claim{c.name, std::move(anchor), status_of(c.pass), c.worst_excess, c.tolerance, "<="};
}

}  // namespace

CollisionCheck check_no_collision(const Trajectory& traj) {
  CollisionCheck out;
  double d = traj.min_wall_distance;
  for (const auto& r : traj.records) d = std::min(d, r.x_min_wall);
  out.min_wall_distance = d;
  const bool contact = traj.failure && traj.failure->kind == FailureKind::WallContact;
  out.pass = d > 0.0 && !contact;
  return out;
}

AlignmentCheck check_alignment(const Trajectory& traj, const Thresholds& th) {
  AlignmentCheck out;
  if (traj.records.empty()) return out;
  out.final_A = traj.records.back().A;
  for (std::size_t k = tail_begin(traj, th.tail_fraction); k < traj.records.size(); ++k)
    out.tail_max_A = std::max(out.tail_max_A, traj.records[k].A);
  out.pass = out.final_A < th.align_eps && out.tail_max_A < 2.0 * th.align_eps;
  return out;
}

std::optional<FitResult> fit_exponential(std::span<const double> t, std::span<const double> amplitude,
                                         double t_start, double t_end, int min_points) {
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size() && k < amplitude.size(); ++k) {
    if (t[k] < t_start || t[k] > t_end) continue;
    if (!(amplitude[k] >= floor) || !std::isfinite(amplitude[k])) continue;
    xs.push_back(t[k]);
    ys.push_back(std::log(amplitude[k]));
  }
  if (static_cast<int>(xs.size()) < min_points) return std::nullopt;

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx, dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss_res += r * r;
  }

  FitResult fit;
  fit.C = std::exp(intercept);
  fit.delta = -slope;
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.t_start = xs.front();
  fit.t_end = xs.back();
  fit.points = static_cast<int>(xs.size());
  return fit;
}

std::optional<FitResult> fit_exponential(const Trajectory& traj, const Thresholds& th,
                                         std::optional<double> window_start) {
  if (traj.records.empty()) return std::nullopt;
  std::vector<double> a;
  a.reserve(traj.records.size());
  for (const auto& r : traj.records) a.push_back(r.A);
  const double start = window_start ? *window_start : traj.sample_times[tail_begin(traj, th.tail_fraction)];
  return fit_exponential(traj.sample_times, a, start, traj.sample_times.back(), th.fit_min_points);
}

std::optional<double> detect_escape(const Trajectory& traj) {
  const double ell = traj.model.wall.ell();
  const auto& states = traj.states;
  if (states.empty()) return std::nullopt;
  for (std::size_t k = states.size(); k-- > 0;) {
    const double xmin = *std::min_element(states[k].x.begin(), states[k].x.end());
    if (xmin < ell) {
      if (k + 1 == states.size()) return std::nullopt;
      return traj.sample_times[k + 1];
    }
  }
  return traj.sample_times.front();
}

SettlementCheck check_settlement(const Trajectory& traj, const Thresholds& th) {
  SettlementCheck out;
  if (traj.states.empty()) return out;
  const std::size_t n = traj.model.n_agents;
  const std::size_t k0 = tail_begin(traj, th.tail_fraction);
  const std::size_t count = traj.states.size() - k0;
  const double ell = traj.model.wall.ell();

  out.min_tail_mean = std::numeric_limits<double>::infinity();
  out.min_tail_position = std::numeric_limits<double>::infinity();
  out.settled_positions.assign(n, 0.0);
  bool all_moving_right = true;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (std::size_t k = k0; k < traj.states.size(); ++k) {
      const double xi = traj.states[k].x[i];
      lo = std::min(lo, xi);
      hi = std::max(hi, xi);
      sum += xi;
    }
    const double mean = sum / static_cast<double>(count);
    out.settled_positions[i] = mean;
    out.max_position_variation = std::max(out.max_position_variation, hi - lo);
    out.min_tail_mean = std::min(out.min_tail_mean, mean);
    out.min_tail_position = std::min(out.min_tail_position, lo);
    if (!(traj.states.back().x[i] > traj.states[k0].x[i])) all_moving_right = false;
  }

  out.pairwise_limits.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
      for (std::size_t k = k0; k < traj.states.size(); ++k) {
        const double d = traj.states[k].x[i] - traj.states[k].x[j];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
      }
      out.pairwise_limits.push_back(sum / static_cast<double>(count));
      out.max_pairwise_variation = std::max(out.max_pairwise_variation, hi - lo);
    }
  }

  out.pass = out.max_position_variation < th.settle_eps && out.min_tail_mean >= ell - th.settle_eps;
  out.pairwise_pass = out.max_pairwise_variation < th.settle_eps;
  if (out.pass) {
    out.mode = SettleMode::Settled;
  } else if (out.pairwise_pass && all_moving_right && traj.records.back().p > 0.0 &&
             out.min_tail_position >= ell - th.settle_eps) {
    out.mode = SettleMode::Drift;
  } else {
    out.mode = SettleMode::Unsettled;
  }
  return out;
}

namespace {

// Trajectories from the integrator carry step-resolved integrals; hand-built
// ones fall back to the trapezoid rule on the sample grid.
bool has_step_integrals(const Trajectory& traj) { return traj.integrals.size() == traj.records.size(); }

}  // namespace

IntervalDecayCheck check_interval_decay(const Trajectory& traj, const Thresholds& th) {
  if (traj.model.geometry.kind() != GeometryKind::Interval)
    throw InputError("interval decay check needs an interval trajectory");
  IntervalDecayCheck out;
  if (traj.records.empty()) return out;

  const auto& t = traj.sample_times;
  std::vector<double> k_cum, f_cum;
  if (has_step_integrals(traj)) {
    for (const auto& acc : traj.integrals) {
      k_cum.push_back(acc.K - traj.integrals.front().K);
      f_cum.push_back(acc.F_sq - traj.integrals.front().F_sq);
    }
  } else {
    std::vector<double> k_series, f_series;
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
      k_series.push_back(traj.records[k].K);
      f_series.push_back(force_square_sum(traj.model, traj.states[k]));
    }
    k_cum = cumulative_trapezoid(t, k_series);
    f_cum = cumulative_trapezoid(t, f_series);
  }
  const double t_mid = 0.5 * (t.front() + t.back());
  const auto mid = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t_mid) - t.begin());

  out.kinetic_integral = k_cum.back();
  out.force_sq_integral = f_cum.back();
  out.kinetic_late_fraction = out.kinetic_integral > 0.0 ? (k_cum.back() - k_cum[mid]) / out.kinetic_integral : 0.0;
  out.force_late_fraction = out.force_sq_integral > 0.0 ? (f_cum.back() - f_cum[mid]) / out.force_sq_integral : 0.0;
  out.final_K = traj.records.back().K;
  out.final_max_force = traj.records.back().F_max;
  out.pass = out.final_K < th.align_eps * th.align_eps && out.kinetic_late_fraction < 0.1 &&
             out.force_late_fraction < 0.1 && out.final_max_force < th.align_eps;
  return out;
}

WorkCheck check_work_of_force(const Trajectory& traj) {
  WorkCheck out;
  out.pass = true;
  const double n = static_cast<double>(traj.model.n_agents);
  for (const auto& r : traj.records) {
    const double w = std::abs(r.W);
    out.max_abs_work = std::max(out.max_abs_work, w);
    if (!std::isfinite(w)) {
      out.pass = false;
      continue;
    }
    const double envelope = std::sqrt(2.0 * r.K) * n * r.F_max;
    if (w == 0.0) continue;
    const double ratio = envelope > 0.0 ? w / envelope : std::numeric_limits<double>::infinity();
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (w > envelope * (1.0 + 1e-12)) out.pass = false;
  }
  return out;
}

namespace {

void add_common_head(TheoremReport& rep, const Trajectory& traj) {
  rep.failure = traj.failure;
  rep.final_time = traj.sample_times.back();
  rep.final_A = traj.records.back().A;
  rep.final_D = traj.records.back().D;
  rep.claims.push_back(Claim{"integration_complete", "solution exists on the whole horizon",
                             status_of(traj.complete()), traj.failure ? traj.failure->time : rep.final_time,
                             traj.horizon > 0.0 ? traj.horizon : rep.final_time, ">="});
  const auto collision = check_no_collision(traj);
  rep.min_wall_distance = collision.min_wall_distance;
  rep.claims.push_back(Claim{"no_collision", "every agent stays strictly inside the domain",
                             status_of(collision.pass), collision.min_wall_distance, 0.0, ">"});
}

void add_budgets(TheoremReport& rep, const Trajectory& traj, const Thresholds& th, bool half_line) {
  const auto& r = traj.records;
  const std::size_t n = traj.model.n_agents;
  rep.claims.push_back(budget_claim(check_energy_monotone(r), "dE/dt = -I2 <= 0"));
  rep.claims.push_back(budget_claim(check_velocity_bound(r, n), "max_i |v_i| <= sqrt(2 N G)"));
  rep.claims.push_back(budget_claim(check_diameter_growth(r, n), "D(t) <= 2 sqrt(2 N G) t + D(0)"));
  const bool stepwise = has_step_integrals(traj);
  if (half_line) {
    const auto lyap = stepwise ? check_lyapunov_budget(r, traj.integrals, th.budget_tol)
                               : check_lyapunov_budget(r, th.budget_tol);
    rep.claims.push_back(budget_claim(lyap, "A + Phi(D) <= L(0) + int_0^t F_max"));
  }
  const auto mom = stepwise ? check_momentum_identity(r, traj.integrals, th.budget_tol)
                            : check_momentum_identity(r, th.budget_tol);
  rep.claims.push_back(budget_claim(mom, "p(t) - p(0) = int_0^t F_mean"));
  if (half_line) rep.claims.push_back(budget_claim(check_momentum_monotone(r), "dp/dt = F_mean >= 0"));
}

}  // namespace

TheoremReport verify_halfline(const Trajectory& traj, const Thresholds& th) {
  th.validate();
  if (traj.model.geometry.kind() != GeometryKind::HalfLine)
    throw InputError("verify_halfline needs a half-line trajectory");
  if (traj.records.empty()) throw InputError("empty trajectory");

  TheoremReport rep;
  rep.geometry = "halfline";
  add_common_head(rep, traj);

  const auto align = check_alignment(traj, th);
  rep.claims.push_back(Claim{"alignment", "A(t) = max_ij |v_i - v_j| -> 0", status_of(align.pass), align.final_A,
                             th.align_eps, "<"});

  const auto settle = check_settlement(traj, th);
  rep.settled_positions = settle.settled_positions;
  rep.pairwise_limits = settle.pairwise_limits;
  rep.regime = to_string(settle.mode);
  rep.claims.push_back(Claim{"strong_flocking", "x_i(t) - x_j(t) converges", status_of(settle.pairwise_pass),
                             settle.max_pairwise_variation, th.settle_eps, "<"});
  const double ell = traj.model.wall.ell();
  const bool settled_outside = settle.mode != SettleMode::Unsettled && settle.min_tail_position >= ell - th.settle_eps;
  rep.claims.push_back(Claim{"settlement", "liminf x_i(t) >= ell with the flock at rest or drifting freely",
                             status_of(settled_outside), settle.min_tail_position, ell - th.settle_eps, ">="});

  rep.escape_time = detect_escape(traj);
  const double p0 = traj.records.front().p;
  if (p0 > 0.0) {
    rep.claims.push_back(Claim{"escape", "p0 > 0: the flock leaves [0, ell) in finite time",
                               status_of(rep.escape_time.has_value()),
                               rep.escape_time.value_or(std::numeric_limits<double>::quiet_NaN()), rep.final_time,
                               "<="});
    rep.fit = fit_exponential(traj, th, rep.escape_time);
    const bool have_fit = rep.fit.has_value();
    const double delta = have_fit ? rep.fit->delta : std::numeric_limits<double>::quiet_NaN();
    const double r2 = have_fit ? rep.fit->r_squared : std::numeric_limits<double>::quiet_NaN();
    rep.claims.push_back(Claim{"exponential_rate", "p0 > 0: A(t) <= C exp(-delta t) with delta > 0",
                               status_of(have_fit && delta > 0.0), delta, 0.0, ">"});
    rep.claims.push_back(Claim{"exponential_fit_quality", "p0 > 0: log A is linear in t after escape",
                               status_of(have_fit && r2 >= th.fit_min_r_squared), r2, th.fit_min_r_squared, ">="});
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.claims.push_back(Claim{"escape", "p0 > 0: the flock leaves [0, ell) in finite time",
                               ClaimStatus::NotApplicable, rep.escape_time.value_or(nan), rep.final_time, "<="});
    rep.claims.push_back(Claim{"exponential_rate", "p0 > 0: A(t) <= C exp(-delta t) with delta > 0",
                               ClaimStatus::NotApplicable, nan, 0.0, ">"});
    rep.claims.push_back(Claim{"exponential_fit_quality", "p0 > 0: log A is linear in t after escape",
                               ClaimStatus::NotApplicable, nan, th.fit_min_r_squared, ">="});
  }

  add_budgets(rep, traj, th, true);
  const auto work = check_work_of_force(traj);
  rep.max_abs_work = work.max_abs_work;
  return rep;
}

TheoremReport verify_interval(const Trajectory& traj, const Thresholds& th) {
  th.validate();
  if (traj.model.geometry.kind() != GeometryKind::Interval)
    throw InputError("verify_interval needs an interval trajectory");
  if (traj.records.empty()) throw InputError("empty trajectory");

  TheoremReport rep;
  rep.geometry = "interval";
  add_common_head(rep, traj);

  const auto align = check_alignment(traj, th);
  rep.claims.push_back(Claim{"alignment", "A(t) = max_ij |v_i - v_j| -> 0", status_of(align.pass), align.final_A,
                             th.align_eps, "<"});

  const auto decay = check_interval_decay(traj, th);
  rep.kinetic_integral = decay.kinetic_integral;
  rep.force_sq_integral = decay.force_sq_integral;
  const double eps2 = th.align_eps * th.align_eps;
  rep.claims.push_back(Claim{"kinetic_decay", "K(t) -> 0", status_of(decay.final_K < eps2), decay.final_K, eps2, "<"});
  rep.claims.push_back(Claim{"kinetic_integrable", "int_0^inf K dt < inf (late-half share)",
                             status_of(decay.kinetic_late_fraction < 0.1), decay.kinetic_late_fraction, 0.1, "<"});
  rep.claims.push_back(Claim{"force_square_integrable", "int_0^inf sum_i |F_i|^2 dt < inf (late-half share)",
                             status_of(decay.force_late_fraction < 0.1), decay.force_late_fraction, 0.1, "<"});
  rep.claims.push_back(Claim{"force_vanishes", "|F_i(t)| -> 0", status_of(decay.final_max_force < th.align_eps),
                             decay.final_max_force, th.align_eps, "<"});

  const auto work = check_work_of_force(traj);
  rep.max_abs_work = work.max_abs_work;
  rep.claims.push_back(Claim{"work_of_force_bounded", "|W| <= sqrt(2K) N F_max", status_of(work.pass),
                             work.worst_ratio, 1.0, "<="});

  add_budgets(rep, traj, th, false);
  return rep;
}

TheoremReport verify_halfline(const ModelSpec& model, const FlockState& s0, const IntegrationPlan& plan,
                              const Thresholds& th) {
  if (model.geometry.kind() != GeometryKind::HalfLine) throw InputError("verify_halfline needs a half-line model");
  th.validate();
  return verify_halfline(integrate_partial(model, s0, plan.t_end, plan.control, plan.sample_every), th);
}

TheoremReport verify_interval(const ModelSpec& model, const FlockState& s0, const IntegrationPlan& plan,
                              const Thresholds& th) {
  if (model.geometry.kind() != GeometryKind::Interval) throw InputError("verify_interval needs an interval model");
  th.validate();
  return verify_interval(integrate_partial(model, s0, plan.t_end, plan.control, plan.sample_every), th);
}

}  // namespace csflock
