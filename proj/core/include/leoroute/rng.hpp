// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace leoroute {

/// Deterministic xoshiro256++ generator. Used instead of std::mt19937 +
/// std distributions so that streams are bit-identical across platforms
/// and standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // Seed expansion per Blackman & Vigna's recommendation.
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_unit_open_low() { return 1.0 - next_unit(); }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Rayleigh(sigma) via inverse transform.
  double next_rayleigh(double sigma) {
    return sigma * std::sqrt(-2.0 * std::log(next_unit_open_low()));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Independent substream for a given master seed and stream index.
/// Parallel Monte Carlo trials each own one; results are then independent
/// of the worker count.
inline Rng substream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t x = master_seed;
  std::uint64_t a = Rng::splitmix64(x);
  x ^= (index + 1) * 0xD1B54A32D192ED03ull;
  std::uint64_t b = Rng::splitmix64(x);
  return Rng(a ^ (b + 0x9E3779B97F4A7C15ull));
}

}  // namespace leoroute
