#pragma once

#include <optional>

#include "dseg/game.hpp"
#include "dseg/geometry.hpp"
#include "dseg/metrics.hpp"
#include "dseg/sampling.hpp"

namespace dseg {

enum class ScheduleKind { Constant, InvSqrt, TheoreticalNonSmooth, TheoreticalVR };

/// Step-size rule. Constant and InvSqrt take γ (γ₀) directly; the two
/// theoretical rules evaluate the closed-form optimal constants from the
/// problem quantities below.
struct Schedule {
  ScheduleKind kind = ScheduleKind::Constant;
  double gamma = 0.1;   // Constant / InvSqrt base value
  double omega = 0.0;   // Ω
  double grad_bound = 0.0;   // G
  double lipschitz = 0.0;    // L
  double sigma = 0.0;
  int players = 0;      // n
  int batch = 0;        // b
  long long horizon = 0;  // t, planned iteration count

  static Schedule constant(double gamma);
  static Schedule inv_sqrt(double gamma0);
};

/// γ_τ for iteration τ (0-based).
double schedule_value(const Schedule& schedule, long long tau);

enum class Method { ExtraGradient, Dseg };

struct SolverConfig {
  Method method = Method::ExtraGradient;
  SamplerKind sampler = SamplerKind::Full;
  int batch = 1;              // b, used by UniformSubset
  bool variance_reduction = false;
  Schedule schedule = Schedule::constant(0.1);
  long long k_max = 10000;    // budget in gradient computations
  std::uint64_t seed = 0;
  int checkpoints = 30;       // log-spaced Nash-error evaluations
  InnerSolveOptions metric;   // inner-solve settings for Err_N
  bool eval_metric = true;    // disable to skip Err_N during the run
  std::optional<Vector> theta0;
  bool cyclic_reshuffle = true;
};

/// One solver run's mutable state.
struct RunState {
  Strategy theta;
  Vector avg_numerator;   // Σ γ_τ θ_τ
  double gamma_sum = 0.0;
  long long k = 0;        // gradient computations so far
  long long tau = 0;      // iterations so far
  SamplerState sampler;
  std::optional<VrTable> vr;
  Rng noise_rng;

  Strategy averaged() const;
};

struct RunResult {
  Trace trace;
  Strategy final_average;
  Strategy final_iterate;
};

RunState make_run_state(const QuadraticGame& game, const Geometry& geometry,
                        const SolverConfig& config);

/// One extra-gradient iteration: extrapolate with the first mask's estimate,
/// update from θ_τ with the second mask's estimate, accumulate θ_τ into the
/// γ-weighted average, advance k by 2b.
void step(const QuadraticGame& game, const Geometry& geometry, RunState& state,
          const Schedule& schedule);

/// Iterate until k ≥ k_max, recording (k, Err_N(θ̂), elapsed) at log-spaced
/// checkpoints. Deterministic given config.seed.
RunResult run(const QuadraticGame& game, const Geometry& geometry,
              const SolverConfig& config);

}  // namespace dseg
