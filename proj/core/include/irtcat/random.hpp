#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace irtcat {

/// Derive an independent 64-bit seed for sub-stream `stream` of `seed`.
/// SplitMix64 finalizer over both inputs; stable across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded random stream used by selection, simulees and the bank generator.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements its own distributions, because the std:: distributions are
/// implementation-defined and would make artifacts differ across toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n);

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irtcat
