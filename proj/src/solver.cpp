#include "dseg/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dseg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Schedule Schedule::constant(double gamma) {
  Schedule s;
  s.kind = ScheduleKind::Constant;
  s.gamma = gamma;
  return s;
}

Schedule Schedule::inv_sqrt(double gamma0) {
  Schedule s;
  s.kind = ScheduleKind::InvSqrt;
  s.gamma = gamma0;
  return s;
}

double schedule_value(const Schedule& s, long long tau) {
  switch (s.kind) {
    case ScheduleKind::Constant:
      if (s.gamma <= 0.0) throw std::invalid_argument("schedule: gamma must be > 0");
      return s.gamma;
    case ScheduleKind::InvSqrt:
      if (s.gamma <= 0.0) throw std::invalid_argument("schedule: gamma must be > 0");
      return s.gamma / std::sqrt(static_cast<double>(tau) + 1.0);
    case ScheduleKind::TheoreticalNonSmooth: {
      if (s.players < 1 || s.batch < 1 || s.batch > s.players)
        throw std::invalid_argument("schedule: need 1 <= b <= n");
      if (s.horizon < 1) throw std::invalid_argument("schedule: horizon must be >= 1");
      if (s.omega <= 0.0 || s.grad_bound <= 0.0)
        throw std::invalid_argument("schedule: omega and G must be > 0");
      const double n = s.players;
      const double b = s.batch;
      const double denom =
          n * ((3.0 * n - b) * s.grad_bound * s.grad_bound / b + s.sigma * s.sigma) *
          static_cast<double>(s.horizon);
      return std::sqrt(2.0 * s.omega / denom);
    }
    case ScheduleKind::TheoreticalVR: {
      if (s.players < 1 || s.batch < 1 || s.batch > s.players)
        throw std::invalid_argument("schedule: need 1 <= b <= n");
      if (s.lipschitz <= 0.0) throw std::invalid_argument("schedule: L must be > 0");
      const double n = s.players;
      const double p = static_cast<double>(s.batch) / n;
      // With p = 1 the first constraint degenerates to +inf.
      double first = kInf;
      if (p < 1.0)
        first = std::pow(p, 1.5) / (std::sqrt((1.0 - p) * (2.0 - p)) * 12.0 *
                                    s.lipschitz * std::sqrt(n));
      const double second = std::sqrt(5.0 / (27.0 * n + 12.0)) / s.lipschitz;
      double third = kInf;
      if (s.sigma > 0.0) {
        if (s.omega <= 0.0 || s.horizon < 1)
          throw std::invalid_argument("schedule: omega and horizon must be positive");
        third = 0.5 * std::sqrt(s.omega / (13.0 * n * s.sigma * s.sigma *
                                           static_cast<double>(s.horizon)));
      }
      const double gamma = std::min(first, std::min(second, third));
      if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("schedule: degenerate VR step size");
      return gamma;
    }
  }
  throw std::logic_error("unreachable");
}

Strategy RunState::averaged() const {
  if (gamma_sum <= 0.0) return theta;
  return {theta.layout, avg_numerator / gamma_sum};
}

namespace {

SamplerState make_sampler(const QuadraticGame& game, const SolverConfig& config) {
  const int n = game.layout.players();
  if (config.method == Method::ExtraGradient) return SamplerState::full(n);
  switch (config.sampler) {
    case SamplerKind::Full:
      return SamplerState::full(n);
    case SamplerKind::UniformSubset:
      return SamplerState::uniform_subset(n, config.batch, config.seed, 1);
    case SamplerKind::CyclicPairs:
      return SamplerState::cyclic_pairs(n, config.seed, 1, config.cyclic_reshuffle);
  }
  throw std::logic_error("unreachable");
}

int effective_batch(const QuadraticGame& game, const SolverConfig& config) {
  if (config.method == Method::ExtraGradient ||
      config.sampler == SamplerKind::Full)
    return game.layout.players();
  if (config.sampler == SamplerKind::CyclicPairs) return 1;
  return config.batch;
}

Geometry check_geometry(const QuadraticGame& game, const Geometry& geometry) {
  if (geometry.layout != game.layout)
    throw std::invalid_argument("geometry layout does not match game layout");
  if (game.geometry == GameGeometry::SimplexProduct &&
      !geometry.constrains_to_simplex())
    throw std::invalid_argument("simplex game run with unconstrained geometry");
  return geometry;
}

}  // namespace

RunState make_run_state(const QuadraticGame& game, const Geometry& geometry,
                        const SolverConfig& config) {
  check_geometry(game, geometry);
  Strategy theta0 = config.theta0
                        ? Strategy{game.layout, *config.theta0}
                        : (geometry.constrains_to_simplex()
                               ? Strategy::simplex_uniform(game.layout)
                               : Strategy{game.layout,
                                          Vector::Ones(game.layout.total_dim())});
  if (theta0.values.size() != game.layout.total_dim())
    throw std::invalid_argument("theta0 size does not match layout");
  if (!geometry.contains(theta0.values))
    throw std::invalid_argument("theta0 is not feasible for the geometry");

  RunState state{std::move(theta0),
                 Vector::Zero(game.layout.total_dim()),
                 0.0,
                 0,
                 0,
                 make_sampler(game, config),
                 std::nullopt,
                 Rng(config.seed, 2)};
  if (config.variance_reduction)
    state.vr = VrTable::init(game, state.theta, state.noise_rng);
  return state;
}

void step(const QuadraticGame& game, const Geometry& geometry, RunState& state,
          const Schedule& schedule) {
  const double gamma = schedule_value(schedule, state.tau);
  auto [extrapolation_mask, update_mask] = state.sampler.next_masks();

  state.avg_numerator.noalias() += gamma * state.theta.values;
  state.gamma_sum += gamma;

  const auto estimate = [&](const Strategy& at, const PlayerMask& mask) {
    return state.vr ? vr_estimate(game, at, mask, *state.vr, state.noise_rng)
                    : masked_estimate(game, at, mask, state.noise_rng);
  };

  // Extrapolation: θ_{τ+1/2} = P_{θ_τ}(γ F̃(θ_τ)). Without VR only the masked
  // blocks move, so the prox is applied per selected block.
  const GradientEstimate first = estimate(state.theta, extrapolation_mask);
  Strategy half = state.theta;
  const auto apply_prox = [&](const GradientEstimate& est, Strategy& out) {
    if (state.vr) {
      for (int i = 0; i < game.layout.players(); ++i)
        prox_block_inplace(geometry, state.theta.values, i,
                           gamma * game.layout.block(est.values, i), out.values);
    } else {
      for (int i : est.mask.selected)
        prox_block_inplace(geometry, state.theta.values, i,
                           gamma * game.layout.block(est.values, i), out.values);
    }
  };
  apply_prox(first, half);

  // Update from θ_τ with the estimate at the extrapolated point.
  const GradientEstimate second = estimate(half, update_mask);
  Strategy next = state.theta;
  apply_prox(second, next);

  state.theta = std::move(next);
  state.tau += 1;
  const int b = static_cast<int>(extrapolation_mask.selected.size());
  state.k += 2ll * b;
}

RunResult run(const QuadraticGame& game, const Geometry& geometry,
              const SolverConfig& config) {
  check_geometry(game, geometry);
  if (config.k_max < 1) throw std::invalid_argument("run: k_max must be >= 1");
  RunState state = make_run_state(game, geometry, config);

  Schedule schedule = config.schedule;
  const int b = effective_batch(game, config);
  if (schedule.kind == ScheduleKind::TheoreticalNonSmooth ||
      schedule.kind == ScheduleKind::TheoreticalVR) {
    schedule.players = game.layout.players();
    schedule.batch = b;
    if (schedule.omega <= 0.0) schedule.omega = geometry.omega;
    if (schedule.sigma == 0.0) schedule.sigma = game.noise_std;
    if (schedule.horizon < 1)
      schedule.horizon = std::max<long long>(1, config.k_max / (2ll * b));
  }

  // Log-spaced checkpoint targets in gradient computations.
  std::vector<long long> targets;
  {
    const int count = std::max(1, config.checkpoints);
    const double k0 = 2.0 * b;
    const double k1 = static_cast<double>(config.k_max);
    for (int j = 0; j < count; ++j) {
      const double f = count == 1 ? 1.0 : static_cast<double>(j) / (count - 1);
      const auto target = static_cast<long long>(
          std::llround(k0 * std::pow(k1 / k0, f)));
      if (targets.empty() || target > targets.back()) targets.push_back(target);
    }
    targets.back() = config.k_max;
  }

  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  std::size_t next_target = 0;
  while (state.k < config.k_max) {
    step(game, geometry, state, schedule);
    if (next_target < targets.size() && state.k >= targets[next_target]) {
      while (next_target < targets.size() && state.k >= targets[next_target])
        ++next_target;
      TracePoint point;
      point.k = state.k;
      point.elapsed_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      if (config.eval_metric) {
        const NashErrorReport report =
            nash_error(game, geometry, state.averaged(), config.metric);
        point.err = report.total;
        point.inner_gap = report.inner_gap;
      }
      result.trace.push_back(point);
    }
  }
  result.final_average = state.averaged();
  result.final_iterate = state.theta;
  return result;
}

}  // namespace dseg
