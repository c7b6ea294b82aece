#include <cmath>
#include <cstring>
#include <vector>

#include "csflock/error.hpp"
#include "csflock/verification.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csflock;

namespace {

ModelSpec halfline(std::size_t n, CommunicationKernel k = CommunicationKernel::power_law(1.0, 0.25), double theta = 1.0) {
  ModelSpec m;
  m.kernel = k;
  m.wall = WallPotential(1.0, theta);
  m.n_agents = n;
  return m;
}

ModelSpec interval(std::size_t n, double a, double b) {
  ModelSpec m = halfline(n);
  m.geometry = ConfinementGeometry::interval(a, b);
  return m;
}

Trajectory run(const ModelSpec& m, const FlockState& s0, double t_end, double every = 0.1) {
  return integrate_partial(m, s0, t_end, StepControl{}, every);
}

}  // namespace

TEST_CASE("synthetic exponential is recovered exactly") {
  std::vector<double> t, a;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.05 * k);
    a.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  const auto fit = fit_exponential(t, a, 0.0, 10.0, 10);
  REQUIRE(fit);
  CHECK(fit->C == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit->delta == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit->r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit->points == 201);
  CHECK_FALSE(fit_exponential(t, a, 9.9, 10.0, 10).has_value());
}

TEST_CASE("fit skips samples at the round-off floor") {
  std::vector<double> t, a;
  for (int k = 0; k < 30; ++k) {
    t.push_back(k);
    a.push_back(k < 20 ? std::exp(-1.0 * k) : 1e-17);
  }
  const auto fit = fit_exponential(t, a, 0.0, 30.0, 10);
  REQUIRE(fit);
  CHECK(fit->points == 20);
  CHECK(fit->delta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resting flock beyond the layer passes every half-line claim") {
  const auto m = halfline(3);
  const FlockState s0{0.0, {2.0, 3.0, 5.0}, {0.0, 0.0, 0.0}};
  const auto tr = run(m, s0, 10.0);
  const auto col = check_no_collision(tr);
  CHECK(col.pass);
  CHECK(col.min_wall_distance == 2.0);
  const auto al = check_alignment(tr, Thresholds{});
  CHECK(al.pass);
  CHECK(al.final_A == 0.0);
  const auto st = check_settlement(tr, Thresholds{});
  CHECK(st.pass);
  CHECK(st.mode == SettleMode::Settled);
  CHECK(st.settled_positions == s0.x);
  CHECK(st.pairwise_limits == std::vector<double>{-1.0, -3.0, -2.0});
  const auto rep = verify_halfline(tr, Thresholds{});
  CHECK(rep.all_pass());
  CHECK(rep.find("escape")->status == ClaimStatus::NotApplicable);
  CHECK(rep.regime == std::string("settled"));
}

TEST_CASE("escape time") {
  const auto m = halfline(2);
  {
    const auto tr = run(m, FlockState{0.0, {1.5, 2.0}, {0.5, 0.5}}, 2.0);
    REQUIRE(detect_escape(tr));
    CHECK(*detect_escape(tr) == 0.0);
  }
  {
    const auto tr = run(m, FlockState{0.0, {0.5, 1.5}, {0.5, 0.5}}, 10.0);
    REQUIRE(detect_escape(tr));
    CHECK(*detect_escape(tr) > 0.0);
    CHECK(*detect_escape(tr) < 2.0);
  }
  {
    const auto tr = run(m, FlockState{0.0, {0.5, 0.6}, {0.0, 0.0}}, 0.5);
    CHECK_FALSE(detect_escape(tr));
  }
}

TEST_CASE("escaping flock drifts: pairwise limits settle, positions do not") {
  const auto m = halfline(4);
  const FlockState s0{0.0, {0.4, 0.9, 1.5, 2.2}, {0.6, 0.1, 0.9, 0.2}};
  const auto tr = run(m, s0, 60.0);
  const auto st = check_settlement(tr, Thresholds{});
  CHECK(st.pairwise_pass);
  CHECK_FALSE(st.pass);
  CHECK(st.mode == SettleMode::Drift);
  const auto rep = verify_halfline(tr, Thresholds{});
  CHECK(rep.find("escape")->status == ClaimStatus::Pass);
  CHECK(rep.find("exponential_rate")->status == ClaimStatus::Pass);
  CHECK(rep.all_pass());
}

TEST_CASE("two agents with a constant kernel align at rate H") {
  const auto m = halfline(2, CommunicationKernel::constant(1.0), 0.0);
  const auto tr = run(m, FlockState{0.0, {5.0, 6.0}, {0.0, 1.0}}, 20.0);
  Thresholds th;
  const auto fit = fit_exponential(tr, th, 0.0);
  REQUIRE(fit);
  CHECK(fit->delta == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fit->r_squared > 0.999);
}

TEST_CASE("negative control: no wall force, leftward flock collides") {
  const auto m = halfline(3, CommunicationKernel::power_law(1.0, 0.25), 0.0);
  const auto tr = run(m, FlockState{0.0, {0.5, 0.7, 1.0}, {-1.0, -0.8, -0.9}}, 5.0);
  CHECK_FALSE(check_no_collision(tr).pass);
  const auto rep = verify_halfline(tr, Thresholds{});
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.find("no_collision")->status == ClaimStatus::Fail);
  REQUIRE(rep.failure);
  CHECK(rep.failure->kind == FailureKind::WallContact);
}

TEST_CASE("interval checks") {
  SUBCASE("resting flock mid-interval") {
    const auto tr = run(interval(2, 0.0, 10.0), FlockState{0.0, {4.0, 6.0}, {0.0, 0.0}}, 5.0);
    const auto d = check_interval_decay(tr, Thresholds{});
    CHECK(d.pass);
    CHECK(d.kinetic_integral == 0.0);
    CHECK(d.force_sq_integral == 0.0);
    const auto w = check_work_of_force(tr);
    CHECK(w.pass);
    CHECK(w.max_abs_work == 0.0);
    CHECK(verify_interval(tr, Thresholds{}).all_pass());
  }
  SUBCASE("wrong geometry") {
    const auto tr = run(halfline(1), FlockState{0.0, {2.0}, {0.0}}, 1.0);
    CHECK_THROWS_AS(check_interval_decay(tr, Thresholds{}), InputError);
    CHECK_THROWS_AS(verify_interval(tr, Thresholds{}), InputError);
  }
  SUBCASE("bouncing flock still aligns; rate is not asserted") {
    const auto m = interval(6, 0.0, 6.0);
    const FlockState s0{0.0, {0.5, 1.0, 1.5, 4.5, 5.0, 5.5}, {1.5, 1.5, 1.5, -1.5, -1.5, -1.5}};
    const auto rep = verify_interval(m, s0, IntegrationPlan{StepControl{}, 300.0, 0.1}, Thresholds{});
    CHECK(rep.find("alignment")->status == ClaimStatus::Pass);
    CHECK(rep.find("no_collision")->status == ClaimStatus::Pass);
    CHECK(rep.find("exponential_rate") == nullptr);
  }
}

TEST_CASE("work envelope holds on an interval run") {
  const auto m = interval(5, 0.0, 4.0);
  const FlockState s0{0.0, {0.3, 1.0, 2.0, 3.0, 3.7}, {-1.0, 0.5, 0.0, 0.8, 1.0}};
  const auto tr = run(m, s0, 30.0);
  const auto w = check_work_of_force(tr);
  CHECK(w.pass);
  CHECK(w.worst_ratio <= 1.0);
  CHECK(w.max_abs_work > 0.0);
}

TEST_CASE("threshold validation") {
  Thresholds th;
  th.tail_fraction = 1.0;
  CHECK_THROWS_AS(th.validate(), InputError);
  th = Thresholds{};
  th.fit_min_points = 5;
  CHECK_THROWS_AS(th.validate(), InputError);
  th = Thresholds{};
  th.align_eps = 0.0;
  CHECK_THROWS_AS(th.validate(), InputError);
}

TEST_CASE("report is reproducible") {
  const auto m = halfline(5);
  const FlockState s0{0.0, {0.3, 0.6, 1.2, 2.0, 2.4}, {0.3, -0.4, 0.8, 0.1, 0.2}};
  const IntegrationPlan plan{StepControl{}, 40.0, 0.1};
  const auto a = verify_halfline(m, s0, plan, Thresholds{});
  const auto b = verify_halfline(m, s0, plan, Thresholds{});
  REQUIRE(a.claims.size() == b.claims.size());
  for (std::size_t i = 0; i < a.claims.size(); ++i) {
    CHECK(a.claims[i].name == b.claims[i].name);
    CHECK(std::memcmp(&a.claims[i].value, &b.claims[i].value, sizeof(double)) == 0);
  }
  CHECK(a.settled_positions == b.settled_positions);
  for (const auto& c : a.claims) CHECK_FALSE(c.anchor.empty());
}
