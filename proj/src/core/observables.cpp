#include "csflock/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csflock/error.hpp"

namespace csflock {

std::array<double, 16> as_row(const DiagnosticsRecord& r) {
  return {r.t, r.K, r.P, r.E, r.p, r.A, r.D, r.I2, r.L, r.W, r.F_max, r.F_mean, r.x_min_wall, r.v_max, r.v_min, r.G};
}

double total_energy(const ModelSpec& model, const FlockState& state) {
  validate_state(model, state);
  double kinetic = 0.0;
  double potential = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    kinetic += state.v[i] * state.v[i];
    potential += model.geometry.potential(model.wall, state.x[i]);
  }
  const double n = static_cast<double>(state.size());
  return 0.5 * kinetic / n + potential / n;
}

double force_square_sum(const ModelSpec& model, const FlockState& state) {
  double sum = 0.0;
  for (double xi : state.x) {
    const double f = model.geometry.force(model.wall, xi);
    sum += f * f;
  }
  return sum;
}

DiagnosticsRecord diagnostics(const ModelSpec& model, const FlockState& s, double initial_energy) {
  validate_state(model, s);
  const std::size_t n = s.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  DiagnosticsRecord r;
  r.t = s.t;
  r.G = initial_energy;

  double kinetic = 0.0, potential = 0.0, vsum = 0.0, fsum = 0.0, work = 0.0;
  double xmin = s.x[0], xmax = s.x[0];
  r.v_min = s.v[0];
  r.v_max = s.v[0];
  r.x_min_wall = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = s.x[i], vi = s.v[i];
    kinetic += vi * vi;
    potential += model.geometry.potential(model.wall, xi);
    vsum += vi;
    const double f = model.geometry.force(model.wall, xi);
    fsum += f;
    work -= vi * f;  // U' = -F
    r.F_max = std::max(r.F_max, std::abs(f));
    r.v_min = std::min(r.v_min, vi);
    r.v_max = std::max(r.v_max, vi);
    xmin = std::min(xmin, xi);
    xmax = std::max(xmax, xi);
    r.x_min_wall = std::min(r.x_min_wall, model.geometry.wall_distance(xi));
  }
  r.K = 0.5 * kinetic * inv_n;
  r.P = potential * inv_n;
  r.E = r.K + r.P;
  r.p = vsum * inv_n;
  r.A = r.v_max - r.v_min;
  r.D = xmax - xmin;
  r.W = work;
  r.F_mean = fsum * inv_n;

  double enstrophy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dv = s.v[i] - s.v[j];
      enstrophy += model.kernel.eval(s.x[i] - s.x[j]) * dv * dv;
    }
  }
  r.I2 = 0.5 * enstrophy * inv_n * inv_n;
  r.L = r.A + model.kernel.primitive(r.D);
  return r;
}

std::vector<double> dissipation_residual(std::span<const DiagnosticsRecord> records) {
  if (records.size() < 3) throw InputError("dissipation residual needs at least 3 samples");
  std::vector<double> out;
  out.reserve(records.size() - 2);
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    const double h1 = records[k].t - records[k - 1].t;
    const double h2 = records[k + 1].t - records[k].t;
    const double dedt = (-h2 / (h1 * (h1 + h2))) * records[k - 1].E + ((h2 - h1) / (h1 * h2)) * records[k].E +
                        (h1 / (h2 * (h1 + h2))) * records[k + 1].E;
    out.push_back(dedt + records[k].I2);
  }
  return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw InputError("trapezoid: t and y differ in length");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  return out;
}

RunningIntegrals& RunningIntegrals::operator+=(const RunningIntegrals& o) noexcept {
  F_mean += o.F_mean;
  F_max += o.F_max;
  K += o.K;
  F_sq += o.F_sq;
  return *this;
}

BudgetIntegrands integrands(const ModelSpec& model, const FlockState& s) {
  BudgetIntegrands out;
  double fsum = 0.0, rate = 0.0, kinetic = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = model.geometry.force(model.wall, s.x[i]);
    fsum += f;
    rate -= model.geometry.curvature(model.wall, s.x[i]) * s.v[i];
    out.F_max = std::max(out.F_max, std::abs(f));
    out.F_sq += f * f;
    kinetic += s.v[i] * s.v[i];
  }
  const double inv_n = 1.0 / static_cast<double>(s.size());
  out.F_mean = fsum * inv_n;
  out.F_mean_rate = rate * inv_n;
  out.K = 0.5 * kinetic * inv_n;
  return out;
}

RunningIntegrals step_integral(const BudgetIntegrands& a, const BudgetIntegrands& b, double dt) {
  const double h = 0.5 * dt;
  RunningIntegrals out;
  out.F_mean = h * (a.F_mean + b.F_mean) + dt * dt / 12.0 * (a.F_mean_rate - b.F_mean_rate);
  out.F_max = h * (a.F_max + b.F_max);
  out.K = h * (a.K + b.K);
  out.F_sq = h * (a.F_sq + b.F_sq);
  return out;
}

namespace {

template <class Fn>
std::vector<double> column(std::span<const DiagnosticsRecord> r, Fn&& fn) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& row : r) out.push_back(fn(row));
  return out;
}

void note(BudgetCheck& c, double excess, double t) {
  if (excess > c.worst_excess || std::isnan(excess)) {
    c.worst_excess = excess;
    c.worst_time = t;
  }
}

void finish(BudgetCheck& c) { c.pass = !std::isnan(c.worst_excess) && c.worst_excess <= c.tolerance; }

BudgetCheck start(std::string name, double tol) {
  BudgetCheck c;
  c.name = std::move(name);
  c.tolerance = tol;
  c.worst_excess = -std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace

BudgetCheck check_energy_monotone(std::span<const DiagnosticsRecord> r, double rel_tol) {
  auto c = start("energy_monotone", r.empty() ? rel_tol : rel_tol * std::max(1.0, std::abs(r.front().E)));
  for (std::size_t k = 1; k < r.size(); ++k) note(c, r[k].E - r[k - 1].E, r[k].t);
  if (r.size() < 2) c.worst_excess = 0.0;
  finish(c);
  return c;
}

BudgetCheck check_velocity_bound(std::span<const DiagnosticsRecord> r, std::size_t n_agents, double abs_tol) {
  auto c = start("velocity_bound", abs_tol);
  for (const auto& row : r) {
    const double bound = std::sqrt(2.0 * static_cast<double>(n_agents) * row.G);
    note(c, std::max(std::abs(row.v_max), std::abs(row.v_min)) - bound, row.t);
  }
  finish(c);
  return c;
}

BudgetCheck check_diameter_growth(std::span<const DiagnosticsRecord> r, std::size_t n_agents, double abs_tol) {
  auto c = start("diameter_growth", abs_tol);
  if (r.empty()) return c;
  const double t0 = r.front().t;
  const double d0 = r.front().D;
  for (const auto& row : r) {
    const double speed = 2.0 * std::sqrt(2.0 * static_cast<double>(n_agents) * row.G);
    note(c, row.D - (speed * (row.t - t0) + d0), row.t);
  }
  finish(c);
  return c;
}

BudgetCheck check_lyapunov_budget(std::span<const DiagnosticsRecord> r, double rel_tol) {
  auto c = start("lyapunov_budget", r.empty() ? rel_tol : rel_tol * std::max(1.0, r.front().L));
  if (r.empty()) return c;
  const auto t = column(r, [](const auto& x) { return x.t; });
  const auto f = column(r, [](const auto& x) { return x.F_max; });
  const auto budget = cumulative_trapezoid(t, f);
  for (std::size_t k = 0; k < r.size(); ++k) note(c, r[k].L - (r.front().L + budget[k]), r[k].t);
  finish(c);
  return c;
}

BudgetCheck check_momentum_identity(std::span<const DiagnosticsRecord> r, double rel_tol) {
  auto c = start("momentum_identity", r.empty() ? rel_tol : rel_tol * std::max(1.0, std::abs(r.front().p) + 1.0));
  if (r.empty()) return c;
  const auto t = column(r, [](const auto& x) { return x.t; });
  const auto f = column(r, [](const auto& x) { return x.F_mean; });
  const auto impulse = cumulative_trapezoid(t, f);
  for (std::size_t k = 0; k < r.size(); ++k) note(c, std::abs(r[k].p - r.front().p - impulse[k]), r[k].t);
  finish(c);
  return c;
}

BudgetCheck check_lyapunov_budget(std::span<const DiagnosticsRecord> r, std::span<const RunningIntegrals> integrals,
                                  double rel_tol) {
  if (integrals.size() != r.size()) throw InputError("lyapunov budget: one integral per record required");
  auto c = start("lyapunov_budget", r.empty() ? rel_tol : rel_tol * std::max(1.0, r.front().L));
  if (r.empty()) return c;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double spent = integrals[k].F_max - integrals.front().F_max;
    note(c, r[k].L - (r.front().L + spent), r[k].t);
  }
  finish(c);
  return c;
}

BudgetCheck check_momentum_identity(std::span<const DiagnosticsRecord> r,
                                    std::span<const RunningIntegrals> integrals, double rel_tol) {
  if (integrals.size() != r.size()) throw InputError("momentum identity: one integral per record required");
  auto c = start("momentum_identity", r.empty() ? rel_tol : rel_tol * std::max(1.0, std::abs(r.front().p) + 1.0));
  if (r.empty()) return c;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double impulse = integrals[k].F_mean - integrals.front().F_mean;
    note(c, std::abs(r[k].p - r.front().p - impulse), r[k].t);
  }
  finish(c);
  return c;
}

BudgetCheck check_momentum_monotone(std::span<const DiagnosticsRecord> r, double abs_tol) {
  auto c = start("momentum_monotone", abs_tol);
  for (std::size_t k = 1; k < r.size(); ++k) note(c, r[k - 1].p - r[k].p, r[k].t);
  if (r.size() < 2) c.worst_excess = 0.0;
  finish(c);
  return c;
}

}  // namespace csflock
