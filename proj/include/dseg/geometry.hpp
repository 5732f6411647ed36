#pragma once

#include "dseg/layout.hpp"

namespace dseg {

enum class GeometryKind {
  EuclideanSimplexProduct,
  EntropySimplexProduct,
  EuclideanUnconstrained,
};

/// Constraint geometry plus the constant Ω consumed by step-size formulas.
///
/// Ω conventions differ between the Euclidean and mirror analyses: the
/// entropy geometry stores the potential gap Σ_i log d_i, the Euclidean
/// simplex product stores the squared-diameter bound 2n, and unconstrained
/// geometries take Ω from the caller.
struct Geometry {
  GeometryKind kind = GeometryKind::EntropySimplexProduct;
  PlayerLayout layout;
  double omega = 0.0;

  static Geometry euclidean_simplex(const PlayerLayout& layout);
  static Geometry entropy_simplex(const PlayerLayout& layout);
  static Geometry unconstrained(const PlayerLayout& layout, double omega);

  bool constrains_to_simplex() const {
    return kind != GeometryKind::EuclideanUnconstrained;
  }
  bool contains(const Vector& v, double tol = 1e-9) const;
};

/// Euclidean projection onto the probability simplex (sort-based).
Vector project_simplex(const Vector& v);

/// Prox-mapping P_z(ξ): Euclidean kinds project z − ξ blockwise; the entropy
/// kind applies the multiplicative closed form z ⊙ exp(−ξ) renormalized per
/// block. Any step size is expected to be folded into ξ by the caller.
Strategy prox_map(const Geometry& geometry, const Strategy& z, const Vector& xi);

/// In-place single-block prox update (the solver's hot path).
void prox_block_inplace(const Geometry& geometry, const Vector& z_full, int player,
                        const Eigen::Ref<const Vector>& xi_block, Vector& out_full);

}  // namespace dseg
