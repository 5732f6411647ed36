#include "dseg/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dseg {

bool PlayerMask::contains(int player) const {
  return std::binary_search(selected.begin(), selected.end(), player);
}

SamplerState::SamplerState(SamplerKind kind, int players, int batch, Rng rng,
                           bool reshuffle)
    : kind_(kind), players_(players), batch_(batch), rng_(rng), reshuffle_(reshuffle) {
  if (players < 1) throw std::invalid_argument("sampler needs at least one player");
  if (kind == SamplerKind::UniformSubset && (batch < 1 || batch > players))
    throw std::invalid_argument("subset size must satisfy 1 <= b <= n");
  if (kind == SamplerKind::CyclicPairs) {
    if (players < 2) throw std::invalid_argument("cyclic sampling needs >= 2 players");
    pairs_.reserve(static_cast<std::size_t>(players) * (players - 1));
    for (int i = 0; i < players; ++i)
      for (int j = 0; j < players; ++j)
        if (i != j) pairs_.emplace_back(i, j);
    shuffle_pairs();
  }
}

SamplerState SamplerState::full(int players) {
  return SamplerState(SamplerKind::Full, players, players, Rng(0), false);
}

SamplerState SamplerState::uniform_subset(int players, int batch, std::uint64_t seed,
                                          std::uint64_t stream) {
  return SamplerState(SamplerKind::UniformSubset, players, batch, Rng(seed, stream),
                      false);
}

SamplerState SamplerState::cyclic_pairs(int players, std::uint64_t seed,
                                        std::uint64_t stream, bool reshuffle) {
  return SamplerState(SamplerKind::CyclicPairs, players, 1, Rng(seed, stream),
                      reshuffle);
}

void SamplerState::shuffle_pairs() {
  if (!reshuffle_) return;
  for (std::size_t i = pairs_.size(); i > 1; --i)
    std::swap(pairs_[i - 1], pairs_[rng_.next_below(i)]);
}

PlayerMask SamplerState::draw_subset() {
  // Partial Fisher-Yates over player indices.
  std::vector<int> idx(static_cast<std::size_t>(players_));
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < batch_; ++j) {
    const auto pick = j + static_cast<int>(rng_.next_below(
                              static_cast<std::uint64_t>(players_ - j)));
    std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick)]);
  }
  idx.resize(static_cast<std::size_t>(batch_));
  std::sort(idx.begin(), idx.end());
  return {std::move(idx), static_cast<double>(players_) / batch_};
}

std::pair<PlayerMask, PlayerMask> SamplerState::next_masks() {
  switch (kind_) {
    case SamplerKind::Full: {
      std::vector<int> all(static_cast<std::size_t>(players_));
      std::iota(all.begin(), all.end(), 0);
      PlayerMask m{all, 1.0};
      return {m, m};
    }
    case SamplerKind::UniformSubset: {
      PlayerMask extrapolation = draw_subset();
      PlayerMask update = draw_subset();
      return {std::move(extrapolation), std::move(update)};
    }
    case SamplerKind::CyclicPairs: {
      const auto [i, j] = pairs_[cursor_];
      if (++cursor_ == pairs_.size()) {
        cursor_ = 0;
        shuffle_pairs();
      }
      const double scale = static_cast<double>(players_);
      return {PlayerMask{{i}, scale}, PlayerMask{{j}, scale}};
    }
  }
  throw std::logic_error("unreachable");
}

VrTable VrTable::init(const QuadraticGame& game, const Strategy& theta0, Rng& rng) {
  VrTable table;
  table.values.resize(game.layout.total_dim());
  for (int i = 0; i < game.layout.players(); ++i)
    game.layout.block(table.values, i) = noisy_gradient(game, i, theta0, rng);
  table.initialized = true;
  return table;
}

GradientEstimate masked_estimate(const QuadraticGame& game, const Strategy& theta,
                                 const PlayerMask& mask, Rng& rng) {
  GradientEstimate est{Vector::Zero(game.layout.total_dim()), mask};
  for (int i : mask.selected)
    game.layout.block(est.values, i) = mask.scale * noisy_gradient(game, i, theta, rng);
  return est;
}

GradientEstimate vr_estimate(const QuadraticGame& game, const Strategy& theta,
                             const PlayerMask& mask, VrTable& table, Rng& rng) {
  if (!table.initialized)
    throw std::logic_error("vr_estimate called with an uninitialized table");
  GradientEstimate est{table.values, mask};
  for (int i : mask.selected) {
    const Vector gi = noisy_gradient(game, i, theta, rng);
    auto out = game.layout.block(est.values, i);
    const auto ri = game.layout.block(table.values, i);
    out = mask.scale * gi + (1.0 - mask.scale) * ri;
    game.layout.block(table.values, i) = gi;
  }
  return est;
}

}  // namespace dseg
