#pragma once

#include <vector>

#include "dseg/game.hpp"
#include "dseg/geometry.hpp"

namespace dseg {

/// Functional Nash error Σ_i [ℓ_i(θ) − min_z ℓ_i(z, θ^{-i})] with one inner
/// convex solve per player.
struct NashErrorReport {
  double total = 0.0;
  std::vector<double> per_player;
  std::vector<int> inner_iters;
  double inner_gap = 0.0;  // largest certified optimality gap among inner solves
  bool certified = true;   // every inner solve reached the requested tolerance
};

struct InnerSolveOptions {
  double tol = 1e-6;
  int budget = 5000;
};

NashErrorReport nash_error(const QuadraticGame& game, const Geometry& geometry,
                           const Strategy& theta,
                           const InnerSolveOptions& options = {});

/// One convergence-curve sample: errors are reported for the γ-averaged
/// iterate after k gradient computations.
struct TracePoint {
  long long k = 0;
  double err = 0.0;
  double err_std = 1.0;  // multiplicative std factor (1 for a single run)
  double inner_gap = 0.0;
  double elapsed_s = 0.0;
};

using Trace = std::vector<TracePoint>;

/// Least-squares slope of log err vs log k over the trailing `window_decades`
/// decades of k. Needs at least five positive-error checkpoints in window.
double slope(const Trace& trace, double window_decades);

/// Geometric mean / multiplicative std across traces, interpolated onto the
/// first trace's k-grid (restricted to the range every trace covers).
Trace aggregate(const std::vector<Trace>& traces);

std::string trace_to_csv(const Trace& trace, bool wall_times = false);
Trace trace_from_csv(const std::string& text);

}  // namespace dseg
