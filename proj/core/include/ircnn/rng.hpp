// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ircnn {

// Every random choice in the toolkit flows through this generator so results
// are reproducible from a single 64-bit seed, independent of the platform's
// standard library.
//
// Generator: xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D).
// Seeding and stream derivation: splitmix64 (increment 0x9E3779B97F4A7C15,
// mixers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
// Normal deviates: Box-Muller on two uniform draws, computed in double.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from (seed, stream). Used to give each
/// image, layer, or epoch its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    state_ = splitmix64(seed);
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;  // xorshift state must be nonzero
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1Dull;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n = 0 returns 0.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Standard normal deviate via Box-Muller. Pairs are generated together
  /// and the second value is served on the next call.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ircnn
