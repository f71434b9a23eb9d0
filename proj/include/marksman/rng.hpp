#pragma once

#include <cmath>
#include <cstdint>

namespace marksman {

// SplitMix64 stream. We deliberately avoid <random> distributions: their
// output is implementation-defined, and runs must be bit-reproducible
// from a seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  bool chance(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kTwoPi * 0.5 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  // Independent child stream; used to give the world and the learner
  // separate streams derived from one run seed.
  Rng derive(std::uint64_t stream_id) const {
    Rng child(state_ ^ (0xA0761D6478BD642FULL * (stream_id + 1)));
    child.next_u64();
    return child;
  }

 private:
  static constexpr double kTwoPi = 6.28318530717958647692;

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace marksman
