#include "dseg/rng.hpp"

#include <cmath>
#include <numbers>

namespace dseg {

namespace {

constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_output(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(splitmix_output(seed + kWeyl) ^
             splitmix_output(stream * 0xda942042e4dd58b5ULL + kWeyl)) {}

std::uint64_t Rng::next_u64() noexcept {
  state_ += kWeyl;
  return splitmix_output(state_);
}

double Rng::next_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t bound) noexcept {
  // Rejection in the top part of the range to avoid modulo bias.
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::next_normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  has_cached_normal_ = true;
  return r * std::cos(angle);
}

std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix_output(a + kWeyl) ^ splitmix_output(b + 0x94d049bb133111ebULL);
}

}  // namespace dseg
