#include "dseg/layout.hpp"

#include <cmath>
#include <stdexcept>

namespace dseg {

PlayerLayout::PlayerLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("layout needs at least one player");
  offsets_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("player dimension must be >= 1");
    offsets_.push_back(total_);
    total_ += d;
  }
}

PlayerLayout PlayerLayout::uniform(int players, int dim) {
  return PlayerLayout(std::vector<int>(static_cast<std::size_t>(players), dim));
}

Strategy Strategy::simplex_uniform(const PlayerLayout& layout) {
  Vector v(layout.total_dim());
  for (int i = 0; i < layout.players(); ++i)
    layout.block(v, i).setConstant(1.0 / layout.dim(i));
  return {layout, std::move(v)};
}

bool is_simplex_product_point(const PlayerLayout& layout, const Vector& v,
                              double tol) {
  if (v.size() != layout.total_dim()) return false;
  for (int i = 0; i < layout.players(); ++i) {
    const auto b = layout.block(v, i);
    if (b.minCoeff() < -tol) return false;
    if (std::abs(b.sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace dseg
