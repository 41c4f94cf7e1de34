#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace imbalance {

/// Seeded generator with distribution helpers whose output depends only on
/// the 64-bit Mersenne Twister stream, so results are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Uniform real on the closed interval [0, 1], in steps of 2^-53.
  double uniform_closed01();

  /// Uniform real on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer over (seed, salt); used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text);

}  // namespace imbalance
