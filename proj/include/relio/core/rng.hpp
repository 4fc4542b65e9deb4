#pragma once

#include <cmath>
#include <cstdint>

namespace relio {

/// Portable counter-based PRNG (SplitMix64 finalizer applied to seed+counter).
/// Output depends only on (seed, counter), never on call history or platform,
/// so sensor streams generated in parallel or re-run elsewhere are bit-identical.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1))) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t nextU64() { return mix(seed_, counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double nextDouble() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double nextUniform(double lo, double hi) { return lo + (hi - lo) * nextDouble(); }

  /// Standard normal via Box-Muller (always consumes two counter steps).
  double nextGaussian() {
    const double u1 = nextDouble();
    const double u2 = nextDouble();
    const double r = std::sqrt(-2.0 * std::log(u1 > 0.0 ? u1 : 0x1.0p-53));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t counter() const { return counter_; }
  void setCounter(std::uint64_t c) { counter_ = c; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_{0};
};

}  // namespace relio
