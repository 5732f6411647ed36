#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dseg/layout.hpp"
#include "dseg/rng.hpp"

namespace dseg {

enum class GameGeometry { SimplexProduct, Unconstrained };

/// Which own-quadratic term the per-player loss carries.
///
/// Full:     ℓ_i(θ) = θ^iᵀ A_i θ + λ‖θ^i − 1/d_i‖₁
/// Bilinear: ℓ_i(θ) = θ^iᵀ A_i θ − ½ θ^iᵀ A_ii θ^i, so that ∇_i ℓ_i = A_i θ
enum class OwnTerm { Full, Bilinear };

struct GameSynthesisParams {
  double skewness = 0.0;      // α ∈ [0,1], weight of the skew part
  double conditioning = 0.01; // μ > 0, smallest eigenvalue of the symmetric part
  PlayerLayout layout;
  std::uint64_t seed = 0;
};

/// n-player quadratic game with payoff matrix A (block rows A_i), optional
/// L1 pull toward the simplex center and per-coordinate Gaussian gradient
/// noise. Immutable after construction; safe to share across threads.
struct QuadraticGame {
  PlayerLayout layout;
  Matrix payoff;              // d × d
  double reg_l1 = 0.0;        // λ ≥ 0
  double noise_std = 0.0;     // σ ≥ 0
  GameGeometry geometry = GameGeometry::SimplexProduct;
  OwnTerm own_term = OwnTerm::Full;
  std::optional<GameSynthesisParams> synthesis;

  void validate() const;

  auto block_row(int i) const { return payoff.middleRows(layout.offset(i), layout.dim(i)); }
  auto own_block(int i) const {
    return payoff.block(layout.offset(i), layout.offset(i), layout.dim(i), layout.dim(i));
  }
};

/// Random payoff A = (1−α)·A_sym + α·A_skew, where A_sym is a Gaussian
/// symmetric matrix shifted so its smallest eigenvalue is exactly μ and
/// A_skew is a Gaussian skew matrix. Deterministic given params.seed.
QuadraticGame synthesize_game(const GameSynthesisParams& params,
                              double reg_l1 = 0.0, double noise_std = 0.0,
                              GameGeometry geometry = GameGeometry::SimplexProduct,
                              OwnTerm own_term = OwnTerm::Full);

double loss(const QuadraticGame& game, int player, const Strategy& theta);

/// Exact (sub)gradient of player `player`'s loss in its own block; the L1
/// kink uses sgn(0) = 0.
Vector subgradient(const QuadraticGame& game, int player, const Strategy& theta);

/// subgradient + σ·z with z i.i.d. standard normal.
Vector noisy_gradient(const QuadraticGame& game, int player, const Strategy& theta,
                      Rng& rng);

/// All players' subgradients stacked (the simultaneous gradient).
Vector simultaneous_gradient(const QuadraticGame& game, const Strategy& theta);

/// ⟨F(θ)−F(θ′), θ−θ′⟩ minimized over `trials` random domain pairs; a
/// non-negative result (up to tolerance) is evidence of monotonicity.
double monotonicity_probe(const QuadraticGame& game, int trials, Rng& rng);

/// Per-player bound G_i = 1.1 · max over `samples` random domain points of
/// ‖subgradient‖₂; returns G = √(Σ G_i²/n).
double estimate_gradient_bound(const QuadraticGame& game, int samples, Rng& rng);

/// Lipschitz bound on θ ↦ F(θ): spectral norm of the linear part of F.
double lipschitz_bound(const QuadraticGame& game);

/// JSON (de)serialization of the game file format.
std::string game_to_json(const QuadraticGame& game);
QuadraticGame game_from_json(const std::string& text);
void save_game(const QuadraticGame& game, const std::string& path);
QuadraticGame load_game(const std::string& path);

}  // namespace dseg
