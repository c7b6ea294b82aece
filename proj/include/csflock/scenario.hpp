#pragma once

#include <cstddef>
#include <cstdint>

#include "csflock/dynamics.hpp"

namespace csflock {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), mixed through the SplitMix64 finalizer. No state is
/// carried between draws, so any sample can be reproduced in isolation.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t index) const noexcept;
  double uniform(std::uint64_t stream, std::uint64_t index, double lo, double hi) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

// The SplitMix64 output for generator state z: golden-ratio increment, then the finalizer.
std::uint64_t splitmix64(std::uint64_t z) noexcept;

inline constexpr std::uint64_t kPositionStream = 0;
inline constexpr std::uint64_t kVelocityStream = 1;

struct InitialBox {
  std::size_t n_agents = 16;
  double x_low = 0.5;
  double x_high = 3.0;
  double v_low = -0.5;
  double v_high = 1.0;
  std::uint64_t seed = 42;
};

/// i.i.d. uniform positions and velocities at t = 0, positions sorted
/// ascending. Agent i takes draw i of each stream before sorting.
FlockState sample_box(const InitialBox& box);

}  // namespace csflock
