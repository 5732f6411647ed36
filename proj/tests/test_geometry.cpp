#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dseg/geometry.hpp"
#include "dseg/rng.hpp"

using namespace dseg;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Brute-force projection oracle: scan a dense grid of the simplex.
Vector grid_project_2d(const Vector& v, double step) {
  Vector best(2);
  double best_dist = 1e300;
  for (double x = 0.0; x <= 1.0 + 1e-12; x += step) {
    const Vector p = vec({x, 1.0 - x});
    const double d = (p - v).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = p;
    }
  }
  return best;
}

Vector random_simplex_point(int d, Rng& rng) {
  Vector v(d);
  double sum = 0.0;
  for (int j = 0; j < d; ++j) {
    v[j] = -std::log(std::max(rng.next_double(), 1e-16));
    sum += v[j];
  }
  return v / sum;
}

}  // namespace

TEST_CASE("project_simplex: feasible points are fixed") {
  const Vector v = vec({0.2, 0.3, 0.5});
  CHECK((project_simplex(v) - v).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("project_simplex matches the dense grid oracle") {
  const Vector v = vec({1.2, 0.4});
  const Vector p = project_simplex(v);
  const Vector oracle = grid_project_2d(v, 1e-4);
  CHECK((p - oracle).norm() < 1e-3);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project_simplex: dominant coordinate snaps to a vertex") {
  const Vector p = project_simplex(vec({10.0, 0.0, 0.0}));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.0);
}

TEST_CASE("project_simplex is idempotent, 1-Lipschitz, and feasible") {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + static_cast<int>(rng.next_below(6));
    Vector a(d), b(d);
    for (int j = 0; j < d; ++j) {
      a[j] = 4.0 * rng.next_normal();
      b[j] = 4.0 * rng.next_normal();
    }
    const Vector pa = project_simplex(a);
    const Vector pb = project_simplex(b);
    CHECK(pa.minCoeff() >= 0.0);
    CHECK(pa.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((project_simplex(pa) - pa).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("project_simplex rejects non-finite input") {
  Vector v = vec({1.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(project_simplex(v), std::invalid_argument);
}

TEST_CASE("omega constants") {
  const auto layout = PlayerLayout::uniform(3, 4);
  CHECK(Geometry::entropy_simplex(layout).omega ==
        doctest::Approx(3.0 * std::log(4.0)));
  CHECK(Geometry::euclidean_simplex(layout).omega == 6.0);
  CHECK(Geometry::unconstrained(layout, 2.5).omega == 2.5);
}

TEST_CASE("prox_map with zero xi is the identity for every geometry") {
  const auto layout = PlayerLayout::uniform(2, 3);
  Rng rng(9);
  Vector v(6);
  layout.block(v, 0) = random_simplex_point(3, rng);
  layout.block(v, 1) = random_simplex_point(3, rng);
  const Strategy z{layout, v};
  const Vector xi = Vector::Zero(6);
  for (const auto& geom : {Geometry::euclidean_simplex(layout),
                           Geometry::entropy_simplex(layout),
                           Geometry::unconstrained(layout, 1.0)}) {
    const Strategy out = prox_map(geom, z, xi);
    CHECK((out.values - z.values).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("entropy prox closed form: softmax reweighting") {
  const auto layout = PlayerLayout(std::vector<int>{2});
  const Strategy z{layout, vec({0.5, 0.5})};
  const Vector xi = vec({std::log(2.0), 0.0});
  const Strategy out = prox_map(Geometry::entropy_simplex(layout), z, xi);
  CHECK(out.values[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(out.values[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("unconstrained prox is a plain step") {
  const auto layout = PlayerLayout(std::vector<int>{2});
  const Strategy z{layout, vec({1.0, 1.0})};
  const Strategy out =
      prox_map(Geometry::unconstrained(layout, 1.0), z, vec({0.5, -0.5}));
  CHECK(out.values[0] == 0.5);
  CHECK(out.values[1] == 1.5);
}

TEST_CASE("entropy prox outputs are strictly positive and normalized") {
  const auto layout = PlayerLayout::uniform(2, 5);
  const auto geom = Geometry::entropy_simplex(layout);
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    Vector v(10), xi(10);
    layout.block(v, 0) = random_simplex_point(5, rng);
    layout.block(v, 1) = random_simplex_point(5, rng);
    for (int j = 0; j < 10; ++j) xi[j] = 50.0 * rng.next_normal();
    const Strategy out = prox_map(geom, {layout, v}, xi);
    for (int i = 0; i < 2; ++i) {
      const auto b = out.block(i);
      CHECK(b.minCoeff() > 0.0);
      CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy prox minimizes the linearized Bregman objective") {
  const auto layout = PlayerLayout(std::vector<int>{4});
  const auto geom = Geometry::entropy_simplex(layout);
  Rng rng(13);
  const auto objective = [](const Vector& u, const Vector& z, const Vector& xi) {
    double val = xi.dot(u);
    for (int j = 0; j < u.size(); ++j) {
      const double uj = std::max(u[j], 1e-300);
      val += uj * std::log(uj / z[j]) - uj + z[j];
    }
    return val;
  };
  for (int t = 0; t < 100; ++t) {
    const Vector z = random_simplex_point(4, rng);
    Vector xi(4);
    for (int j = 0; j < 4; ++j) xi[j] = 3.0 * rng.next_normal();
    const Strategy out = prox_map(geom, {layout, z}, xi);
    const double achieved = objective(out.values, z, xi);
    for (int probe = 0; probe < 20; ++probe) {
      const Vector u = random_simplex_point(4, rng);
      CHECK(achieved <= objective(u, z, xi) + 1e-9);
    }
  }
}

TEST_CASE("euclidean simplex prox equals projecting z - xi") {
  const auto layout = PlayerLayout::uniform(3, 3);
  const auto geom = Geometry::euclidean_simplex(layout);
  Rng rng(17);
  Vector v(9), xi(9);
  for (int i = 0; i < 3; ++i) layout.block(v, i) = random_simplex_point(3, rng);
  for (int j = 0; j < 9; ++j) xi[j] = rng.next_normal();
  const Strategy out = prox_map(geom, {layout, v}, xi);
  for (int i = 0; i < 3; ++i) {
    const Vector direct = project_simplex(layout.block(v, i) - layout.block(xi, i));
    CHECK((out.block(i) - direct).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("entropy prox rejects blocks touching the boundary") {
  const auto layout = PlayerLayout(std::vector<int>{2});
  const Strategy z{layout, vec({1.0, 0.0})};
  CHECK_THROWS_AS(prox_map(Geometry::entropy_simplex(layout), z, vec({0.1, 0.1})),
                  std::domain_error);
}
