#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csflock/kernels.hpp"
#include "csflock/potentials.hpp"

namespace csflock {

/// Phase point: time plus one position and one velocity per agent.
struct FlockState {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;

  std::size_t size() const noexcept { return x.size(); }

  friend bool operator==(const FlockState&, const FlockState&) = default;
};

struct ModelSpec {
  CommunicationKernel kernel = CommunicationKernel::power_law(1.0, 0.25);
  WallPotential wall{};
  ConfinementGeometry geometry = ConfinementGeometry::half_line();
  std::size_t n_agents = 1;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct PhaseDerivative {
  std::vector<double> dx;
  std::vector<double> dv;
};

// Throws InputError on size mismatch or non-finite entries and DomainError
// when an agent sits outside the open domain.
void validate_state(const ModelSpec& model, const FlockState& state);

/// Right-hand side of the confined alignment system:
///   dx_i = v_i
///   dv_i = (1/N) sum_j phi(x_i - x_j) (v_j - v_i) + F_i
PhaseDerivative rhs(const ModelSpec& model, const FlockState& state);

/// Velocity part of rhs written into `dv`. The inner sum runs over j in
/// ascending order for every i, so results are bit-reproducible.
void accelerations(const ModelSpec& model, std::span<const double> x, std::span<const double> v,
                   std::span<double> dv);

/// The alignment term alone (no wall force).
void alignment_accelerations(const CommunicationKernel& kernel, std::span<const double> x,
                             std::span<const double> v, std::span<double> dv);

double momentum(const FlockState& state);

/// (1/N) sum_i F_i, the time derivative of the momentum.
double mean_force(const ModelSpec& model, const FlockState& state);

}  // namespace csflock
