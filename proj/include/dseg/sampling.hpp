#pragma once

#include <utility>
#include <vector>

#include "dseg/game.hpp"

namespace dseg {

/// Players selected for one gradient evaluation plus the n/b rescaling that
/// keeps the masked estimator unbiased.
struct PlayerMask {
  std::vector<int> selected;  // sorted
  double scale = 1.0;         // n / |selected|

  bool contains(int player) const;
};

enum class SamplerKind { Full, UniformSubset, CyclicPairs };

/// Mask source for the two gradient evaluations of one iteration.
///
/// Full evaluates everyone; UniformSubset(b) draws two independent uniform
/// b-subsets; CyclicPairs walks a shuffled schedule of all n(n−1) ordered
/// pairs, extrapolating the first player and updating the second (b = 1),
/// reshuffling after every complete pass (the reshuffle can be disabled for
/// a fixed periodic schedule).
class SamplerState {
 public:
  static SamplerState full(int players);
  static SamplerState uniform_subset(int players, int batch, std::uint64_t seed,
                                     std::uint64_t stream = 0);
  static SamplerState cyclic_pairs(int players, std::uint64_t seed,
                                   std::uint64_t stream = 0, bool reshuffle = true);

  /// Masks for the next iteration: (extrapolation, update).
  std::pair<PlayerMask, PlayerMask> next_masks();

  SamplerKind kind() const { return kind_; }
  int batch() const { return batch_; }
  const std::vector<std::pair<int, int>>& pair_schedule() const { return pairs_; }

 private:
  SamplerState(SamplerKind kind, int players, int batch, Rng rng, bool reshuffle);

  PlayerMask draw_subset();
  void shuffle_pairs();

  SamplerKind kind_;
  int players_;
  int batch_;
  Rng rng_;
  bool reshuffle_;
  std::vector<std::pair<int, int>> pairs_;
  std::size_t cursor_ = 0;
};

/// Per-player gradient blocks; blocks of unmasked players are zero for the
/// plain estimator and recalled from the table for the variance-reduced one.
struct GradientEstimate {
  Vector values;
  PlayerMask mask;
};

/// Table of the last gradient estimate seen per player.
struct VrTable {
  Vector values;
  bool initialized = false;

  /// R ← g(θ₀) for every player (full noisy simultaneous gradient).
  static VrTable init(const QuadraticGame& game, const Strategy& theta0, Rng& rng);
};

/// Eq-style masked estimator: block i is (n/b)·g_i(θ) when selected, zero
/// otherwise.
GradientEstimate masked_estimate(const QuadraticGame& game, const Strategy& theta,
                                 const PlayerMask& mask, Rng& rng);

/// Variance-reduced estimator: for selected players the output block is
/// (n/b)·g_i(θ) + (1 − n/b)·R_i and the table entry becomes g_i(θ); other
/// blocks are read from the table unchanged. Output is dense.
GradientEstimate vr_estimate(const QuadraticGame& game, const Strategy& theta,
                             const PlayerMask& mask, VrTable& table, Rng& rng);

}  // namespace dseg
