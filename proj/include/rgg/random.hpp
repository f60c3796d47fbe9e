#pragma once

#include <cstdint>
#include <random>

namespace rgg {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for trial `index` under `master_seed`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

/// Deterministic 64-bit generator; the whole stream is a function of the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Poisson variate: sequential inversion below mean 30, transformed rejection
/// (PTRS) above.
std::uint64_t poisson_variate(Rng& rng, double mean);

}  // namespace rgg
