#pragma once

#include <cstdint>

namespace dseg {

/// Deterministic 64-bit generator used everywhere in this project.
///
/// splitmix64 (Vigna's mixer over a Weyl sequence): the state advances by a
/// fixed odd constant and each output is a bijective hash of the state, so
/// the stream is a pure function of (seed, stream, call index) and identical
/// across platforms. Normal variates use Box-Muller on 53-bit uniforms, which
/// keeps runs reproducible on a given platform/libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept;

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  /// Standard normal variate.
  double next_normal() noexcept;

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Stable 64-bit mix of two words (used to derive per-run seeds).
std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace dseg
