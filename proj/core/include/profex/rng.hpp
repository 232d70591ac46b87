#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace profex {

/// Deterministic random source.
///
/// Uniforms are built from the top 53 bits of a 64-bit Mersenne twister, and
/// exponential and normal variates are derived from those uniforms by explicit
/// formulas, so a given seed yields the same stream with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Unit exponential by inversion, -log(U).
  double exponential();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for stream `i` derived from a parent seed (splitmix64 finalizer of
/// seed + (i + 1) * 0x9E3779B97F4A7C15). Monte Carlo loops process draws in
/// chunks of `kChunkSize`, chunk c drawing from Rng(split_seed(seed, c)).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) noexcept;

inline constexpr std::size_t kChunkSize = 8192;

}  // namespace profex
