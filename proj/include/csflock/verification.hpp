#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csflock/integrator.hpp"

namespace csflock {

/// Finite-horizon stand-ins for the t -> infinity statements.
struct Thresholds {
  double align_eps = 1e-2;
  double settle_eps = 1e-2;
  double tail_fraction = 0.25;
  int fit_min_points = 10;
  double budget_tol = 1e-3;
  double fit_min_r_squared = 0.99;

  void validate() const;
};

struct FitResult {
  double C = 0.0;
  double delta = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  int points = 0;
};

enum class ClaimStatus { Pass, Fail, NotApplicable };

const char* to_string(ClaimStatus s) noexcept;

struct Claim {
  std::string name;
  std::string anchor;      // the statement being checked
  ClaimStatus status = ClaimStatus::NotApplicable;
  double value = 0.0;      // measured metric
  double threshold = 0.0;  // bound it is compared against
  std::string relation;    // how value relates to threshold for a pass, e.g. "<", ">="
};

enum class SettleMode { Settled, Drift, Unsettled };

const char* to_string(SettleMode m) noexcept;

struct TheoremReport {
  std::string geometry;
  std::vector<Claim> claims;
  double min_wall_distance = 0.0;
  double final_A = 0.0;
  double final_D = 0.0;
  double final_time = 0.0;
  std::optional<FitResult> fit;
  std::vector<double> settled_positions;
  std::vector<double> pairwise_limits;  // x_i - x_j for i < j, row-major
  std::optional<double> escape_time;
  std::optional<std::string> regime;
  double kinetic_integral = 0.0;
  double force_sq_integral = 0.0;
  double max_abs_work = 0.0;
  std::optional<IntegrationFailure> failure;

  bool all_pass() const noexcept;
  const Claim* find(std::string_view name) const noexcept;
};

// ---- individual checks ----------------------------------------------------

struct CollisionCheck {
  bool pass = false;
  double min_wall_distance = 0.0;
};
CollisionCheck check_no_collision(const Trajectory& traj);

struct AlignmentCheck {
  bool pass = false;
  double final_A = 0.0;
  double tail_max_A = 0.0;
};
AlignmentCheck check_alignment(const Trajectory& traj, const Thresholds& th);

/// Least squares of log A against t over [t_start, t_end], skipping samples
/// with A below 100 machine epsilon. nullopt when fewer than min_points remain.
std::optional<FitResult> fit_exponential(std::span<const double> t, std::span<const double> amplitude,
                                         double t_start, double t_end, int min_points);
/// Window starts at `window_start` if given, else at the tail window.
std::optional<FitResult> fit_exponential(const Trajectory& traj, const Thresholds& th,
                                         std::optional<double> window_start = std::nullopt);

/// First sample time after which every later sample has min_i x_i >= ell.
std::optional<double> detect_escape(const Trajectory& traj);

struct SettlementCheck {
  bool pass = false;           // absolute settlement: every x_i at rest in the tail, mean >= ell - eps
  bool pairwise_pass = false;  // x_i - x_j frozen in the tail
  SettleMode mode = SettleMode::Unsettled;
  double max_position_variation = 0.0;
  double max_pairwise_variation = 0.0;
  double min_tail_mean = 0.0;
  double min_tail_position = 0.0;
  std::vector<double> settled_positions;
  std::vector<double> pairwise_limits;
};
SettlementCheck check_settlement(const Trajectory& traj, const Thresholds& th);

struct IntervalDecayCheck {
  bool pass = false;
  double final_K = 0.0;
  double final_max_force = 0.0;
  double kinetic_integral = 0.0;
  double kinetic_late_fraction = 0.0;
  double force_sq_integral = 0.0;
  double force_late_fraction = 0.0;
};
IntervalDecayCheck check_interval_decay(const Trajectory& traj, const Thresholds& th);

struct WorkCheck {
  bool pass = false;
  double max_abs_work = 0.0;
  double worst_ratio = 0.0;  // max_k |W_k| / envelope_k
};
/// |W| <= sqrt(2K) N F_max at every sample (Cauchy-Schwarz envelope).
WorkCheck check_work_of_force(const Trajectory& traj);

// ---- whole-theorem drivers ------------------------------------------------

struct IntegrationPlan {
  StepControl control{};
  double t_end = 200.0;
  double sample_every = 0.1;
};

/// Runs the half-line model and checks non-collision, alignment, strong
/// flocking, settlement outside the wall layer and, for p0 > 0, escape plus
/// exponential alignment, together with the a-priori budgets.
TheoremReport verify_halfline(const ModelSpec& model, const FlockState& s0, const IntegrationPlan& plan,
                              const Thresholds& th);
TheoremReport verify_halfline(const Trajectory& traj, const Thresholds& th);

/// Interval counterpart: non-collision, alignment, decay of K and of the wall
/// forces, the work-of-force envelope and the energy budgets.
TheoremReport verify_interval(const ModelSpec& model, const FlockState& s0, const IntegrationPlan& plan,
                              const Thresholds& th);
TheoremReport verify_interval(const Trajectory& traj, const Thresholds& th);

}  // namespace csflock
