#include <cmath>
#include <vector>

#include "csflock/error.hpp"
#include "csflock/integrator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csflock;

namespace {

ModelSpec model_for(std::size_t n, CommunicationKernel k, double theta = 1.0) {
  ModelSpec m;
  m.kernel = k;
  m.wall = WallPotential(1.0, theta);
  m.n_agents = n;
  return m;
}

double max_state_diff(const FlockState& a, const FlockState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max({d, std::abs(a.x[i] - b.x[i]), std::abs(a.v[i] - b.v[i])});
  return d;
}

}  // namespace

TEST_CASE("single free agent moves exactly") {
  const auto m = model_for(1, CommunicationKernel::power_law(1.0, 0.25));
  const auto step = step_embedded(m, FlockState{0.0, {2.0}, {1.0}}, 0.1);
  REQUIRE(step);
  CHECK(step->state.x[0] == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(step->state.v[0] == 1.0);
  CHECK(step->error_estimate <= 1e-15);
}

TEST_CASE("aligned pair keeps its velocities") {
  const auto m = model_for(2, CommunicationKernel::power_law(1.0, 0.25));
  const auto step = step_embedded(m, FlockState{0.0, {2.0, 3.0}, {0.7, 0.7}}, 0.05);
  REQUIRE(step);
  CHECK(step->state.v[0] == 0.7);
  CHECK(step->state.v[1] == 0.7);
}

TEST_CASE("stage leaving the domain rejects the step") {
  const auto m = model_for(1, CommunicationKernel::power_law(1.0, 0.25));
  CHECK_FALSE(step_embedded(m, FlockState{0.0, {0.01}, {-10.0}}, 0.1).has_value());
  CHECK_THROWS_AS(step_embedded(m, FlockState{0.0, {1.0}, {0.0}}, -1.0), InputError);
}

TEST_CASE("two agents with a constant kernel follow the closed form") {
  const oracle::TwoAgentFree exact{1.0, 5.0, 6.0, 0.0, 1.0};
  const auto m = model_for(2, CommunicationKernel::constant(1.0), 0.0);
  const FlockState s0{0.0, {exact.x1, exact.x2}, {exact.v1, exact.v2}};
  const auto one = integrate(m, s0, 1.0, StepControl{}, 0.1);
  CHECK(one.final_state().v[1] - one.final_state().v[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

  const auto tr = integrate(m, s0, 10.0, StepControl{}, 0.1);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const double t = tr.sample_times[k];
    CHECK(std::abs(tr.states[k].v[0] - exact.v_1(t)) <= 1e-6);
    CHECK(std::abs(tr.states[k].v[1] - exact.v_2(t)) <= 1e-6);
    CHECK(std::abs(tr.states[k].x[0] - exact.x_1(t)) <= 1e-6);
    CHECK(std::abs(tr.states[k].x[1] - exact.x_2(t)) <= 1e-6);
  }
}

TEST_CASE("resting flock outside the wall layer is a fixed point") {
  const auto m = model_for(3, CommunicationKernel::power_law(1.0, 0.25));
  const FlockState s0{0.0, {1.5, 2.0, 4.0}, {0.0, 0.0, 0.0}};
  const auto tr = integrate(m, s0, 5.0, StepControl{}, 0.5);
  CHECK(tr.final_state().x == s0.x);
  CHECK(tr.final_state().v == s0.v);
}

TEST_CASE("sample grid and trajectory shape") {
  const auto m = model_for(4, CommunicationKernel::power_law(1.0, 0.25));
  const FlockState s0{0.0, {0.3, 0.8, 1.5, 2.5}, {-0.5, 0.2, 0.1, 0.4}};
  const auto tr = integrate(m, s0, 3.05, StepControl{}, 0.1);
  REQUIRE(tr.sample_times.size() == tr.states.size());
  REQUIRE(tr.sample_times.size() == tr.records.size());
  CHECK(tr.sample_times.front() == 0.0);
  CHECK(tr.sample_times.back() == 3.05);
  CHECK(tr.sample_times.size() == 32);
  for (std::size_t k = 1; k < tr.sample_times.size(); ++k) {
    CHECK(tr.sample_times[k] > tr.sample_times[k - 1]);
    CHECK(tr.states[k].t == tr.sample_times[k]);
    for (double xi : tr.states[k].x) CHECK(xi > 0.0);
  }
  CHECK(tr.min_wall_distance > 0.0);
  CHECK(tr.complete());
}

TEST_CASE("integration is deterministic") {
  const auto m = model_for(6, CommunicationKernel::power_law(1.0, 0.25));
  const FlockState s0{0.0, {0.2, 0.5, 0.9, 1.4, 2.0, 3.0}, {-0.8, 0.3, -0.1, 0.5, 0.0, -0.4}};
  const auto a = integrate(m, s0, 10.0, StepControl{}, 0.1);
  const auto b = integrate(m, s0, 10.0, StepControl{}, 0.1);
  CHECK(a.states == b.states);
  CHECK(a.accepted_steps == b.accepted_steps);
}

TEST_CASE("without a wall force a leftward flock hits the wall") {
  const auto m = model_for(2, CommunicationKernel::power_law(1.0, 0.25), 0.0);
  const FlockState s0{0.0, {0.5, 0.8}, {-1.0, -1.0}};
  const auto tr = integrate_partial(m, s0, 5.0, StepControl{}, 0.1);
  REQUIRE(tr.failure.has_value());
  CHECK(tr.failure->kind == FailureKind::WallContact);
  CHECK(tr.failure->time == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(integrate(m, s0, 5.0, StepControl{}, 0.1), IntegrationError);
}

TEST_CASE("bad requests") {
  const auto m = model_for(1, CommunicationKernel::power_law(1.0, 0.25));
  const FlockState s0{0.0, {2.0}, {0.0}};
  StepControl bad;
  bad.dt_min = 1.0;
  CHECK_THROWS_AS(integrate(m, s0, 1.0, bad, 0.1), InputError);
  CHECK_THROWS_AS(integrate(m, s0, 0.0, StepControl{}, 0.1), InputError);
  CHECK_THROWS_AS(integrate(m, s0, 1.0, StepControl{}, 0.0), InputError);
  CHECK_THROWS_AS(integrate_fixed(m, s0, 1.0, 0.03, 0.1), InputError);
  CHECK_THROWS_AS(reference_integrate(m, s0, 1.05, 0.1, 0.1), InputError);
}

TEST_CASE("reference RK4 error drops ~16x per halving on a smooth run") {
  const auto m = model_for(3, CommunicationKernel::power_law(1.0, 0.5), 0.0);
  const FlockState s0{0.0, {2.0, 3.0, 5.0}, {1.0, -1.0, 0.5}};
  const auto fine = reference_integrate(m, s0, 4.0, 1.0 / 1024, 0.5);
  double prev = 0.0;
  for (double dt : {0.25, 0.125, 0.0625}) {
    const double err = max_state_diff(reference_integrate(m, s0, 4.0, dt, 0.5).final_state(), fine.final_state());
    if (prev > 0.0) {
      CAPTURE(dt);
      CHECK(prev / err == doctest::Approx(16.0).epsilon(0.2));
    }
    prev = err;
  }
}

TEST_CASE("adaptive run agrees with a fine reference near the wall") {
  const auto m = model_for(8, CommunicationKernel::power_law(1.0, 0.25));
  const FlockState s0{0.0, {0.3, 0.6, 0.9, 1.2, 1.6, 2.0, 2.5, 3.0}, {-0.6, 0.4, -0.2, 0.8, -0.4, 0.1, -0.7, 0.3}};
  const StepControl c{};
  const auto adaptive = integrate(m, s0, 20.0, c, 0.1);
  const auto ref = reference_integrate(m, s0, 20.0, 1.0 / 1000, 0.1);
  double worst = 0.0;
  for (std::size_t k = 0; k < adaptive.states.size(); ++k) worst = std::max(worst, max_state_diff(adaptive.states[k], ref.states[k]));
  CHECK(worst <= 10.0 * c.abs_tol);
}
