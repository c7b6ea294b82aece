#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csflock/dynamics.hpp"

namespace csflock {

/// One sampled row of every scalar the energy, alignment and confinement
/// estimates track. Field order is the CSV column order.
struct DiagnosticsRecord {
  double t = 0.0;
  double K = 0.0;           // kinetic energy (1/2N) sum v^2
  double P = 0.0;           // potential energy (1/N) sum U(x)
  double E = 0.0;           // K + P
  double p = 0.0;           // momentum (1/N) sum v
  double A = 0.0;           // v_max - v_min
  double D = 0.0;           // x_max - x_min
  double I2 = 0.0;          // (1/2N^2) sum phi(x_i - x_j) (v_i - v_j)^2
  double L = 0.0;           // A + Phi(D)
  double W = 0.0;           // sum v_i U'(x_i)
  double F_max = 0.0;       // max |F_i|
  double F_mean = 0.0;      // (1/N) sum F_i
  double x_min_wall = 0.0;  // smallest distance from any agent to any wall
  double v_max = 0.0;
  double v_min = 0.0;
  double G = 0.0;           // energy at t = 0, carried on every row
};

inline constexpr std::array<std::string_view, 16> kDiagnosticsColumns = {
    "t", "K", "P", "E", "p", "A", "D", "I2", "L", "W", "F_max", "F_mean", "x_min_wall", "v_max", "v_min", "G"};

std::array<double, 16> as_row(const DiagnosticsRecord& r);

DiagnosticsRecord diagnostics(const ModelSpec& model, const FlockState& state, double initial_energy);

/// Initial energy G = E(s0).
double total_energy(const ModelSpec& model, const FlockState& state);

/// sum_i F_i^2 at one state.
double force_square_sum(const ModelSpec& model, const FlockState& state);

/// r_k = (dE/dt)_k + I2_k at interior samples, dE/dt by the three-point
/// central difference (valid on nonuniform grids). Needs >= 3 records.
std::vector<double> dissipation_residual(std::span<const DiagnosticsRecord> records);

/// Cumulative trapezoid of y(t); out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y);

/// Time integrals of the budget integrands from the start of a run, summed
/// by the trapezoid rule over every accepted integrator step.
struct RunningIntegrals {
  double F_mean = 0.0;  // int (1/N) sum F_i
  double F_max = 0.0;   // int max |F_i|
  double K = 0.0;       // int K
  double F_sq = 0.0;    // int sum F_i^2

  RunningIntegrals& operator+=(const RunningIntegrals& o) noexcept;
  friend bool operator==(const RunningIntegrals&, const RunningIntegrals&) = default;
};

/// The integrands of RunningIntegrals at one state, plus the time derivative
/// of the mean force, -(1/N) sum U''(x_i) v_i.
struct BudgetIntegrands {
  double F_mean = 0.0;
  double F_mean_rate = 0.0;
  double F_max = 0.0;
  double K = 0.0;
  double F_sq = 0.0;
};

BudgetIntegrands integrands(const ModelSpec& model, const FlockState& state);

/// Increment of RunningIntegrals over one step of length dt: the mean force
/// by the endpoint-corrected trapezoid rule (fourth order), the rest by the
/// plain trapezoid rule.
RunningIntegrals step_integral(const BudgetIntegrands& a, const BudgetIntegrands& b, double dt);

/// Outcome of one a-priori budget over a run: the largest excess of the
/// left-hand side over its bound (<= 0 means the inequality held everywhere).
struct BudgetCheck {
  std::string name;
  bool pass = true;
  double worst_excess = 0.0;  // max_k (lhs_k - bound_k)
  double tolerance = 0.0;
  double worst_time = 0.0;
};

// E(t_{k+1}) <= E(t_k) + tol, tol = rel_tol * max(1, |E(0)|).
BudgetCheck check_energy_monotone(std::span<const DiagnosticsRecord> r, double rel_tol = 1e-9);
// max_i |v_i| <= sqrt(2 N G) + abs_tol.
BudgetCheck check_velocity_bound(std::span<const DiagnosticsRecord> r, std::size_t n_agents,
                                 double abs_tol = 1e-9);
// D(t) <= 2 sqrt(2 N G) t + D(0) + abs_tol.
BudgetCheck check_diameter_growth(std::span<const DiagnosticsRecord> r, std::size_t n_agents,
                                  double abs_tol = 1e-9);
// L(t) <= L(0) + int_0^t F_max + rel_tol * max(1, L(0)).
BudgetCheck check_lyapunov_budget(std::span<const DiagnosticsRecord> r, double rel_tol = 1e-3);
// |p(t) - p(0) - int_0^t F_mean| <= rel_tol * max(1, |p(0)| + 1).
BudgetCheck check_momentum_identity(std::span<const DiagnosticsRecord> r, double rel_tol = 1e-4);
// As above, with the integrals taken from `integrals[k]` (one per record)
// instead of the trapezoid rule on the sample grid.
BudgetCheck check_lyapunov_budget(std::span<const DiagnosticsRecord> r, std::span<const RunningIntegrals> integrals,
                                  double rel_tol = 1e-3);
BudgetCheck check_momentum_identity(std::span<const DiagnosticsRecord> r,
                                    std::span<const RunningIntegrals> integrals, double rel_tol = 1e-4);
// p(t_{k+1}) >= p(t_k) - abs_tol (half-line: every wall force points right).
BudgetCheck check_momentum_monotone(std::span<const DiagnosticsRecord> r, double abs_tol = 1e-9);

}  // namespace csflock
