#include "csflock/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "csflock/error.hpp"

namespace csflock {

void validate_state(const ModelSpec& model, const FlockState& state) {
  if (state.x.empty()) throw InputError("flock state has no agents");
  if (state.x.size() != state.v.size()) throw InputError("positions and velocities differ in length");
  if (state.x.size() != model.n_agents) {
    std::ostringstream msg;
    msg << "state has " << state.x.size() << " agents but the model expects " << model.n_agents;
    throw InputError(msg.str());
  }
  if (!std::isfinite(state.t)) throw InputError("state time is not finite");
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!std::isfinite(state.x[i]) || !std::isfinite(state.v[i])) {
      std::ostringstream msg;
      msg << "agent " << i << " has a non-finite position or velocity";
      throw InputError(msg.str());
    }
    if (!model.geometry.contains(state.x[i])) {
      std::ostringstream msg;
      msg << "agent " << i << " at x = " << state.x[i] << " is outside the open domain";
      throw DomainError(msg.str());
    }
  }
}

void alignment_accelerations(const CommunicationKernel& kernel, std::span<const double> x,
                             std::span<const double> v, std::span<double> dv) {
  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    const double xi = x[i];
    const double vi = v[i];
    for (std::size_t j = 0; j < n; ++j) sum += kernel.eval(xi - x[j]) * (v[j] - vi);
    dv[i] = sum * inv_n;
  }
}

void accelerations(const ModelSpec& model, std::span<const double> x, std::span<const double> v,
                   std::span<double> dv) {
  alignment_accelerations(model.kernel, x, v, dv);
  for (std::size_t i = 0; i < x.size(); ++i) dv[i] += model.geometry.force(model.wall, x[i]);
}

PhaseDerivative rhs(const ModelSpec& model, const FlockState& state) {
  validate_state(model, state);
  PhaseDerivative d;
  d.dx = state.v;
  d.dv.resize(state.size());
  accelerations(model, state.x, state.v, d.dv);
  return d;
}

double momentum(const FlockState& state) {
  if (state.v.empty()) throw InputError("momentum of an empty flock");
  double sum = 0.0;
  for (double vi : state.v) sum += vi;
  return sum / static_cast<double>(state.v.size());
}

double mean_force(const ModelSpec& model, const FlockState& state) {
  if (state.x.empty()) throw InputError("mean force of an empty flock");
  double sum = 0.0;
  for (double xi : state.x) sum += model.geometry.force(model.wall, xi);
  return sum / static_cast<double>(state.x.size());
}

}  // namespace csflock
