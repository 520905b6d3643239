#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mw {

/// Counter-based 64-bit generator (SplitMix64 finalizer applied to
/// seed + counter * 0x9E3779B97F4A7C15). Output depends only on
/// (seed, counter), so substreams are reproducible in any language.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
  static constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  /// Substream for trial `index`: seed XOR index, counter restarted.
  CounterRng substream(std::uint64_t index) const { return CounterRng(seed_ ^ index); }

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * kGamma;
    z = (z ^ (z >> 30)) * kMul1;
    z = (z ^ (z >> 27)) * kMul2;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next_u64() % bound; }

  /// Standard normal via Box-Muller (one value per two uniforms).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace mw
