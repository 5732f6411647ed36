#pragma once

#include <Eigen/Core>
#include <vector>

namespace dseg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Block partition of a stacked parameter vector, one block per player.
class PlayerLayout {
 public:
  PlayerLayout() = default;
  explicit PlayerLayout(std::vector<int> dims);

  /// n equal blocks of size dim.
  static PlayerLayout uniform(int players, int dim);

  int players() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  int offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  int total_dim() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  auto block(Vector& v, int i) const { return v.segment(offset(i), dim(i)); }
  auto block(const Vector& v, int i) const { return v.segment(offset(i), dim(i)); }

  bool operator==(const PlayerLayout&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Stacked joint strategy θ = (θ¹,…,θⁿ).
struct Strategy {
  PlayerLayout layout;
  Vector values;

  Strategy() = default;
  Strategy(PlayerLayout l, Vector v) : layout(std::move(l)), values(std::move(v)) {}

  /// Every block on the probability simplex, uniform within each block.
  static Strategy simplex_uniform(const PlayerLayout& layout);

  auto block(int i) { return layout.block(values, i); }
  auto block(int i) const { return layout.block(values, i); }
};

/// True when every block is componentwise ≥ -tol and sums to 1 within tol.
bool is_simplex_product_point(const PlayerLayout& layout, const Vector& v,
                              double tol = 1e-9);

}  // namespace dseg
