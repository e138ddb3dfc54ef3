#pragma once

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>
#include <utility>

#include "bregman/errors.hpp"

namespace bregman {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A finite real vector tagged with the space it lives in. Primal points
/// and dual points never convert into one another implicitly; the only
/// bridges are grad / grad_conj of a Legendre function.
template <class Space>
class Point {
 public:
  Point() = default;

  explicit Point(Vector coords) : coords_(std::move(coords)) { check_finite(); }

  Point(std::initializer_list<double> values) : coords_(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) coords_[i++] = v;
    check_finite();
  }

  static Point zero(Eigen::Index n) { return Point(Vector::Zero(n)); }

  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  void check_finite() const {
    if (!coords_.allFinite()) throw DomainError("point has non-finite entries");
  }

  Vector coords_;
};

struct PrimalSpace {};
struct DualSpace {};

using PrimalPoint = Point<PrimalSpace>;
using DualPoint = Point<DualSpace>;

/// Duality pairing <x*, x>.
inline double pair(const DualPoint& xstar, const PrimalPoint& x) { return xstar.coords().dot(x.coords()); }

inline double max_abs_diff(const PrimalPoint& a, const PrimalPoint& b) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff();
}

}  // namespace bregman
