#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dseg/solver.hpp"

using namespace dseg;

namespace {

QuadraticGame skew2x2() {
  QuadraticGame game;
  game.layout = PlayerLayout::uniform(2, 1);
  game.payoff = Matrix(2, 2);
  game.payoff << 0, 1, -1, 0;
  game.geometry = GameGeometry::Unconstrained;
  game.own_term = OwnTerm::Bilinear;
  return game;
}

QuadraticGame rps_game(double sigma = 0.0) {
  Matrix m(3, 3);
  m << 0, 1, -1,
      -1, 0, 1,
       1, -1, 0;
  QuadraticGame g;
  g.layout = PlayerLayout::uniform(2, 3);
  g.payoff = Matrix::Zero(6, 6);
  g.payoff.block(0, 3, 3, 3) = m;
  g.payoff.block(3, 0, 3, 3) = -m.transpose();
  g.noise_std = sigma;
  return g;
}

SolverConfig full_eg(double gamma, long long k_max) {
  SolverConfig c;
  c.method = Method::ExtraGradient;
  c.schedule = Schedule::constant(gamma);
  c.k_max = k_max;
  return c;
}

}  // namespace

TEST_CASE("schedule: constant and inv_sqrt") {
  CHECK(schedule_value(Schedule::constant(0.1), 0) == 0.1);
  CHECK(schedule_value(Schedule::constant(0.1), 1000) == 0.1);
  CHECK(schedule_value(Schedule::inv_sqrt(0.4), 0) == 0.4);
  CHECK(schedule_value(Schedule::inv_sqrt(0.4), 3) == doctest::Approx(0.2));
  CHECK_THROWS_AS(schedule_value(Schedule::constant(0.0), 0), std::invalid_argument);
}

TEST_CASE("schedule: closed form for the non-smooth optimal constant") {
  Schedule s;
  s.kind = ScheduleKind::TheoreticalNonSmooth;
  s.omega = 1.0;
  s.grad_bound = 1.0;
  s.sigma = 0.0;
  s.players = 2;
  s.batch = 1;
  s.horizon = 100;
  // sqrt(2*1 / (2*((3*2-1)*1/1 + 0)*100)) = sqrt(0.002)
  CHECK(schedule_value(s, 0) == doctest::Approx(std::sqrt(0.002)).epsilon(1e-9));
}

TEST_CASE("schedule: VR closed form and its p=1 and sigma=0 limits") {
  Schedule s;
  s.kind = ScheduleKind::TheoreticalVR;
  s.omega = 2.0;
  s.lipschitz = 3.0;
  s.sigma = 0.5;
  s.players = 4;
  s.batch = 2;
  s.horizon = 50;
  const double p = 0.5;
  const double first = std::pow(p, 1.5) / (std::sqrt((1 - p) * (2 - p)) * 12 * 3.0 *
                                           std::sqrt(4.0));
  const double second = std::sqrt(5.0 / (27.0 * 4 + 12.0)) / 3.0;
  const double third = 0.5 * std::sqrt(2.0 / (13.0 * 4 * 0.25 * 50));
  CHECK(schedule_value(s, 0) ==
        doctest::Approx(std::min({first, second, third})).epsilon(1e-12));

  s.batch = 4;  // p = 1: the first constraint disappears
  CHECK(schedule_value(s, 0) ==
        doctest::Approx(std::min(second, third)).epsilon(1e-12));

  s.sigma = 0.0;  // noiseless: the sigma term disappears
  CHECK(schedule_value(s, 0) == doctest::Approx(second).epsilon(1e-12));
}

TEST_CASE("step: hand-computed full extra-gradient on the skew game") {
  const auto game = skew2x2();
  const auto geometry = Geometry::unconstrained(game.layout, 1.0);
  SolverConfig c = full_eg(0.5, 4);
  Vector t0(2);
  t0 << 1.0, 1.0;
  c.theta0 = t0;
  RunState state = make_run_state(game, geometry, c);
  step(game, geometry, state, c.schedule);
  CHECK(state.theta.values[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(state.theta.values[1] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(state.k == 4);
  CHECK(state.tau == 1);
}

TEST_CASE("step: gamma=0 is rejected, stationary points are fixed") {
  const auto game = skew2x2();
  const auto geometry = Geometry::unconstrained(game.layout, 1.0);
  SolverConfig c = full_eg(0.1, 4);
  c.theta0 = Vector::Zero(2);  // F(0) = 0
  RunState state = make_run_state(game, geometry, c);
  step(game, geometry, state, c.schedule);
  CHECK(state.theta.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("step: norm contracts by exactly sqrt(1 - g^2 + g^4) on the skew game") {
  const auto game = skew2x2();
  const auto geometry = Geometry::unconstrained(game.layout, 1.0);
  const double gamma = 0.5;
  SolverConfig c = full_eg(gamma, 1000);
  Vector t0(2);
  t0 << 1.0, 1.0;
  c.theta0 = t0;
  RunState state = make_run_state(game, geometry, c);
  const double factor = 1.0 - gamma * gamma + std::pow(gamma, 4.0);
  double norm = state.theta.values.norm();
  for (int i = 0; i < 50; ++i) {
    step(game, geometry, state, c.schedule);
    const double next = state.theta.values.norm();
    CHECK(next * next / (norm * norm) == doctest::Approx(factor).epsilon(1e-12));
    norm = next;
  }
  // Empirical per-iteration decay over 50 iterations vs the analytic radius.
  const double measured = std::pow(state.theta.values.norm() / std::sqrt(2.0),
                                   1.0 / 50.0);
  CHECK(measured == doctest::Approx(std::sqrt(factor)).epsilon(0.01));
}

TEST_CASE("averaged iterate with constant gamma is the arithmetic mean") {
  const auto game = rps_game();
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig c = full_eg(0.2, 40);
  RunState state = make_run_state(game, geometry, c);
  Vector mean_acc = Vector::Zero(6);
  int count = 0;
  for (int i = 0; i < 10; ++i) {
    mean_acc += state.theta.values;  // θ_τ enters the average before the step
    ++count;
    step(game, geometry, state, c.schedule);
    const Vector expect = mean_acc / count;
    CHECK((state.averaged().values - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("run: every recorded state stays feasible and k = 2*b*tau") {
  const auto game = rps_game(0.5);
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig c;
  c.method = Method::Dseg;
  c.sampler = SamplerKind::UniformSubset;
  c.batch = 1;
  c.schedule = Schedule::constant(0.1);
  c.k_max = 2000;
  c.seed = 5;
  RunState state = make_run_state(game, geometry, c);
  for (int i = 0; i < 1000; ++i) {
    step(game, geometry, state, c.schedule);
    CHECK(geometry.contains(state.theta.values, 1e-9));
  }
  CHECK(state.k == 2 * 1 * state.tau);
  CHECK(geometry.contains(state.averaged().values, 1e-9));
}

TEST_CASE("run: RPS with entropy mirror reaches the equilibrium") {
  const auto game = rps_game();
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig c = full_eg(0.3, 4 * 10000);  // 1e4 iterations at b = n = 2
  Vector t0(6);
  t0 << 0.8, 0.1, 0.1, 0.8, 0.1, 0.1;
  c.theta0 = t0;
  c.checkpoints = 10;
  const RunResult rr = run(game, geometry, c);
  REQUIRE(!rr.trace.empty());
  CHECK(rr.trace.back().err <= 1e-3);
  // The equilibrium is uniform.
  CHECK((rr.final_average.values.array() - 1.0 / 3).abs().maxCoeff() < 0.05);
}

TEST_CASE("run is deterministic given the seed") {
  const auto game = rps_game(1.0);
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig c;
  c.method = Method::Dseg;
  c.sampler = SamplerKind::CyclicPairs;
  c.schedule = Schedule::constant(0.05);
  c.k_max = 400;
  c.seed = 11;
  c.checkpoints = 6;
  const RunResult a = run(game, geometry, c);
  const RunResult b = run(game, geometry, c);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].k == b.trace[i].k);
    CHECK(a.trace[i].err == b.trace[i].err);
  }
  CHECK((a.final_average.values - b.final_average.values).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("DSEG with b=n reproduces full extra-gradient exactly, even with noise") {
  const auto game = rps_game(1.0);
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig eg = full_eg(0.1, 400);
  eg.seed = 3;
  eg.checkpoints = 5;
  SolverConfig ds = eg;
  ds.method = Method::Dseg;
  ds.sampler = SamplerKind::UniformSubset;
  ds.batch = 2;
  const RunResult a = run(game, geometry, eg);
  const RunResult b = run(game, geometry, ds);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].k == b.trace[i].k);
    CHECK(a.trace[i].err == b.trace[i].err);
  }
  CHECK((a.final_average.values - b.final_average.values).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("infeasible theta0 is rejected") {
  const auto game = rps_game();
  const auto geometry = Geometry::entropy_simplex(game.layout);
  SolverConfig c = full_eg(0.1, 10);
  Vector bad(6);
  bad << 0.9, 0.2, 0.1, 0.5, 0.3, 0.2;  // first block sums to 1.2
  c.theta0 = bad;
  CHECK_THROWS_AS(run(game, geometry, c), std::invalid_argument);
}
