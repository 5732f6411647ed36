#include "dseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dseg {

namespace {
constexpr double kEntropyFloor = 1e-300;
}

Geometry Geometry::euclidean_simplex(const PlayerLayout& layout) {
  return {GeometryKind::EuclideanSimplexProduct, layout, 2.0 * layout.players()};
}

Geometry Geometry::entropy_simplex(const PlayerLayout& layout) {
  double omega = 0.0;
  for (int d : layout.dims()) omega += std::log(static_cast<double>(d));
  return {GeometryKind::EntropySimplexProduct, layout, omega};
}

Geometry Geometry::unconstrained(const PlayerLayout& layout, double omega) {
  return {GeometryKind::EuclideanUnconstrained, layout, omega};
}

bool Geometry::contains(const Vector& v, double tol) const {
  if (!constrains_to_simplex()) return v.allFinite();
  return is_simplex_product_point(layout, v, tol);
}

Vector project_simplex(const Vector& v) {
  if (!v.allFinite()) throw std::invalid_argument("project_simplex: non-finite input");
  const int d = static_cast<int>(v.size());
  std::vector<double> sorted(v.data(), v.data() + d);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  int support = 0;
  for (int j = 0; j < d; ++j) {
    cumulative += sorted[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / (j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0) {
      tau = candidate;
      support = j + 1;
    }
  }
  (void)support;
  return (v.array() - tau).max(0.0);
}

void prox_block_inplace(const Geometry& geometry, const Vector& z_full, int player,
                        const Eigen::Ref<const Vector>& xi_block, Vector& out_full) {
  const auto z = geometry.layout.block(z_full, player);
  auto out = geometry.layout.block(out_full, player);
  switch (geometry.kind) {
    case GeometryKind::EuclideanUnconstrained:
      out = z - xi_block;
      return;
    case GeometryKind::EuclideanSimplexProduct:
      out = project_simplex(z - xi_block);
      return;
    case GeometryKind::EntropySimplexProduct: {
      if (z.minCoeff() <= 0.0)
        throw std::domain_error("entropy prox requires strictly positive blocks");
      // Work in logs and shift by the max to keep the exponentials bounded.
      out = z.array().log() - xi_block.array();
      const double shift = out.maxCoeff();
      out = (out.array() - shift).exp();
      out /= out.sum();
      out = out.array().max(kEntropyFloor);
      return;
    }
  }
}

Strategy prox_map(const Geometry& geometry, const Strategy& z, const Vector& xi) {
  if (xi.size() != geometry.layout.total_dim())
    throw std::invalid_argument("prox_map: xi size mismatch");
  Strategy out{geometry.layout, Vector(geometry.layout.total_dim())};
  for (int i = 0; i < geometry.layout.players(); ++i)
    prox_block_inplace(geometry, z.values, i,
                       geometry.layout.block(xi, i), out.values);
  return out;
}

}  // namespace dseg
