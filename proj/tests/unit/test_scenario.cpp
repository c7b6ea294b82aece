#include <algorithm>
#include <cmath>
#include <set>

#include "csflock/scenario.hpp"
#include "doctest.h"

using namespace csflock;

TEST_CASE("splitmix64 matches the published reference sequence") {
  // Successive outputs of the SplitMix64 generator seeded with 0; the
  // function applies the golden-ratio increment itself.
  constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ull;
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
  CHECK(splitmix64(gamma) == 0x6e789e6aa1b965f4ull);
  CHECK(splitmix64(2 * gamma) == 0x06c45d188009454full);
}

TEST_CASE("draws are pure functions of seed, stream and index") {
  const CounterRng a(7), b(7), c(8);
  CHECK(a.bits(0, 5) == b.bits(0, 5));
  CHECK(a.bits(0, 5) != a.bits(1, 5));
  CHECK(a.bits(0, 5) != a.bits(0, 6));
  CHECK(a.bits(0, 5) != c.bits(0, 5));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = a.uniform(0, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double w = a.uniform(1, i, -2.0, 3.0);
    CHECK(w >= -2.0);
    CHECK(w < 3.0);
  }
}

TEST_CASE("uniform draws have the right mean and variance") {
  const CounterRng rng(42);
  const std::size_t n = 100000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform(kVelocityStream, i);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  const double sigma_mean = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(mean - 0.5) < 3.0 * sigma_mean);
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("box sampling is sorted, in range and reproducible") {
  InitialBox box;
  box.n_agents = 64;
  const auto s = sample_box(box);
  REQUIRE(s.size() == 64);
  CHECK(s.t == 0.0);
  CHECK(std::is_sorted(s.x.begin(), s.x.end()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.x[i] >= box.x_low);
    CHECK(s.x[i] < box.x_high);
    CHECK(s.v[i] >= box.v_low);
    CHECK(s.v[i] < box.v_high);
  }
  CHECK(sample_box(box) == s);
  box.seed = 43;
  CHECK_FALSE(sample_box(box) == s);
}

TEST_CASE("velocities are not reordered with positions") {
  InitialBox box;
  box.n_agents = 5;
  const auto s = sample_box(box);
  const CounterRng rng(box.seed);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.v[i] == rng.uniform(kVelocityStream, i, box.v_low, box.v_high));
  std::multiset<double> drawn;
  for (std::size_t i = 0; i < 5; ++i) drawn.insert(rng.uniform(kPositionStream, i, box.x_low, box.x_high));
  CHECK(std::multiset<double>(s.x.begin(), s.x.end()) == drawn);
}

TEST_CASE("degenerate box yields a resting cluster") {
  InitialBox box;
  box.n_agents = 3;
  box.x_low = box.x_high = 2.0;
  box.v_low = box.v_high = 0.0;
  const auto s = sample_box(box);
  CHECK(s.x == std::vector<double>{2.0, 2.0, 2.0});
  CHECK(s.v == std::vector<double>{0.0, 0.0, 0.0});
}
