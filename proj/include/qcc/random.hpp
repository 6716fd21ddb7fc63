#pragma once

#include <cstdint>
#include <random>

namespace qcc {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t fmix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Per-trial seed derivation: seed_i = fmix64(base ^ fmix64(i + golden)).
/// Depends only on (base, index), so results do not depend on scheduling.
constexpr std::uint64_t mix64(std::uint64_t base, std::uint64_t index) noexcept {
  return fmix64(base ^ fmix64(index + 0x9e3779b97f4a7c15ULL));
}

/// Deterministic random stream. The engine's output sequence is fixed by the
/// C++ standard; the conversions below are ours so that draws are identical
/// across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream for_trial(std::uint64_t base_seed, std::uint64_t trial) {
    return RandomStream(mix64(base_seed, trial));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcc
