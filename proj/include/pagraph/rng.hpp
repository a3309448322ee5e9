#pragma once

#include <cstdint>
#include <random>

namespace pagraph {

/// SplitMix64 finalizer. Used as the fixed 64-bit mixing function for
/// deriving independent streams from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replicate `index` under `master`:
///   splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03))
/// Distinct replicate indices give decorrelated mt19937_64 seeds.
constexpr std::uint64_t stream_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL));
}

// Random stream used by every simulator. The engine is std::mt19937_64 (whose
// output sequence is fixed by the standard); the variate transforms below are
// written out so draws do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Unbiased uniform integer on {0, ..., bound-1}; bound must be > 0.
  std::uint64_t index(std::uint64_t bound);

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pagraph
