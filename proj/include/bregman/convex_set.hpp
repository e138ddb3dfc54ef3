#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "bregman/legendre.hpp"

namespace bregman {

class ConvexSet;

namespace sets {

struct WholeSpace {
  Eigen::Index dim = 0;
};

/// { x : <a, x> <= b }
struct Halfspace {
  Vector a;
  double b = 0.0;
};

/// { x : <a, x> = b }
struct Hyperplane {
  Vector a;
  double b = 0.0;
};

/// { x : lower <= x <= upper }, infinite bounds allowed.
struct Box {
  Vector lower;
  Vector upper;
};

/// { x >= 0 : sum x_i = radius }
struct Simplex {
  Eigen::Index dim = 0;
  double radius = 1.0;
};

/// Finite intersection. `witness` is a point of the intersection supplied at
/// construction; it is the only feasibility certificate.
struct Intersection {
  std::vector<ConvexSet> members;
  Vector witness;
};

}  // namespace sets

/// Closed convex constraint set. Immutable once built; the factories reject
/// degenerate data (a = 0, lower > upper, infeasible intersections).
class ConvexSet {
 public:
  using Variant = std::variant<sets::WholeSpace, sets::Halfspace, sets::Hyperplane, sets::Box, sets::Simplex,
                               sets::Intersection>;

  static ConvexSet whole_space(Eigen::Index dim);
  static ConvexSet halfspace(Vector a, double b);
  static ConvexSet hyperplane(Vector a, double b);
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet simplex(Eigen::Index dim, double radius);
  static ConvexSet intersection(std::vector<ConvexSet> members, Vector witness);

  const Variant& variant() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return dim_; }
  std::string_view type_name() const;
  bool is_whole_space() const noexcept { return std::holds_alternative<sets::WholeSpace>(v_); }

 private:
  ConvexSet(Variant v, Eigen::Index dim) : v_(std::move(v)), dim_(dim) {}

  Variant v_;
  Eigen::Index dim_;
};

/// True iff every defining inequality / equality holds within `tol` (absolute).
bool contains(const ConvexSet& set, const PrimalPoint& x, double tol);

/// A linear row <a, x> <= b, or <a, x> = b when `equality` is set.
struct LinearConstraint {
  Vector a;
  double b = 0.0;
  bool equality = false;
};

/// Flattened form of any ConvexSet: coordinate bounds plus linear rows.
/// Every variant (including nested intersections) reduces to this.
struct Polyhedron {
  Vector lower;
  Vector upper;
  std::vector<LinearConstraint> rows;

  Eigen::Index dim() const noexcept { return lower.size(); }
  bool has_bounds() const;
};

Polyhedron flatten(const ConvexSet& set);

struct ProjectionResult {
  PrimalPoint point;
  /// Multipliers of the linear rows of the flattened set (empty for closed forms).
  std::vector<double> multipliers;
  int inner_iterations = 0;
  double residual = 0.0;
};

/// Bregman projection proj_C^f(x): the unique minimiser of D_f(., x) over C.
///
/// Single rows are handled by an exact scalar dual solve, boxes by a
/// coordinatewise clamp, the simplex under neg_entropy by rescaling, and
/// intersections by cyclic Bregman projections with dual (Dykstra) corrections,
/// run until constraint violation and complementarity fall below `tol`.
ProjectionResult bregman_project(const LegendreFunction& f, const ConvexSet& set, const PrimalPoint& x,
                                 double tol = 1e-13);

/// max over sampled y in C of <grad f(x) - grad f(z), y - z>. Values <= tol
/// certify that z is the projection of x (sampled variational characterisation).
double verify_projection_optimality(const LegendreFunction& f, const ConvexSet& set, const PrimalPoint& z,
                                    const PrimalPoint& x, int samples, std::uint64_t seed = 42, double radius = 1.0);

}  // namespace bregman
