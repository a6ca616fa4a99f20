#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dynaug {

/// Deterministic pseudo-random stream. Identical seed and call sequence give
/// identical outputs on every platform: the engine is the fully specified
/// std::mt19937_64 and all variate transforms are implemented here instead of
/// relying on the implementation-defined std::*_distribution classes.
///
/// A stream must not be shared across concurrent callers; derive independent
/// substreams with child() instead.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  /// Normal variate via Box-Muller. sigma = 0 is allowed and returns mu.
  double normal(double mu, double sigma) {
    double u1 = uniform();
    double u2 = uniform();
    // u1 -> (0,1] so log() is finite.
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return mu + sigma * r * std::cos(2.0 * M_PI * u2);
  }

  /// Independent substream identified by (parent seed, id). The derivation
  /// depends only on the constructor seed, not on how much of this stream
  /// has been consumed.
  RngStream child(std::uint64_t id) const {
    return RngStream(mix(seed_ ^ mix(id + 0x9E3779B97F4A7C15ull)));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds before they reach the engine.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dynaug
