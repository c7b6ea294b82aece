#include "csflock/scenario.hpp"

#include <algorithm>

#include "csflock/error.hpp"

namespace csflock {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const noexcept {
  // Three chained finalizer rounds decorrelate neighbouring keys.
  return splitmix64(splitmix64(splitmix64(seed_) ^ stream) ^ index);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const noexcept {
  return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index, double lo, double hi) const noexcept {
  if (lo == hi) return lo;
  return lo + (hi - lo) * uniform(stream, index);
}

FlockState sample_box(const InitialBox& box) {
  if (box.n_agents == 0) throw InputError("n_agents must be positive");
  if (!(box.x_low <= box.x_high) || !(box.v_low <= box.v_high)) throw InputError("empty sampling box");
  const CounterRng rng(box.seed);
  FlockState s;
  s.x.resize(box.n_agents);
  s.v.resize(box.n_agents);
  for (std::size_t i = 0; i < box.n_agents; ++i) {
    s.x[i] = rng.uniform(kPositionStream, i, box.x_low, box.x_high);
    s.v[i] = rng.uniform(kVelocityStream, i, box.v_low, box.v_high);
  }
  std::sort(s.x.begin(), s.x.end());
  return s;
}

}  // namespace csflock
