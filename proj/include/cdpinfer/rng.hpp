#pragma once

#include <cstdint>
#include <random>

namespace cdp {

/// Reproducible random stream. The generator is a seeded std::mt19937_64 and
/// every variate is produced by explicit inverse-CDF style transforms of its
/// raw 64-bit output, so a seed determines the draw sequence bit for bit on
/// every platform. Streams are split with a splitmix64-derived child seed;
/// a stream must be owned by exactly one execution thread at a time.
class RngState {
public:
  explicit RngState(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream for chain/draw index `stream`.
  RngState split(std::uint64_t stream) const;

  std::uint64_t next_u64();

  /// Uniform strictly inside (0,1), 53-bit resolution.
  double uniform01();
  double uniform(double a, double b);

  /// Unbiased-enough index draw in [0, n) (fixed-point multiply).
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal via inverse CDF.
  double normal();
  /// Standard exponential (rate 1).
  double exponential();
  /// Beta(a, b) via the regularized incomplete beta inverse.
  double beta(double a, double b);

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace cdp
