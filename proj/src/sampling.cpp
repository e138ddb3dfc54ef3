#include "bregman/sampling.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bregman {

PrimalPoint feasible_point(const ConvexSet& set, const LegendreFunction& f, const PrimalPoint& hint) {
  if (contains(set, hint, 1e-12) && f.in_domain(hint)) return hint;
  if (const auto* in = std::get_if<sets::Intersection>(&set.variant())) {
    PrimalPoint w(in->witness);
    if (f.in_domain(w)) return w;
  }
  Vector start = hint.coords();
  if (f.positive_domain()) {
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      if (!(start[i] > 0.0)) start[i] = 1.0;
    }
  }
  return bregman_project(f, set, PrimalPoint(std::move(start))).point;
}

std::vector<PrimalPoint> sample_set_points(const ConvexSet& set, const LegendreFunction& f,
                                           const PrimalPoint& anchor, int count, Rng& rng, double radius) {
  const Polyhedron poly = flatten(set);
  const Eigen::Index n = anchor.dim();
  const Vector& x = anchor.coords();

  std::vector<const LinearConstraint*> equalities;
  for (const auto& row : poly.rows) {
    if (row.equality) equalities.push_back(&row);
  }
  Matrix null_proj = Matrix::Identity(n, n);
  if (!equalities.empty()) {
    Matrix a(static_cast<Eigen::Index>(equalities.size()), n);
    for (std::size_t k = 0; k < equalities.size(); ++k) a.row(static_cast<Eigen::Index>(k)) = equalities[k]->a;
    const Matrix pinv = a.completeOrthogonalDecomposition().pseudoInverse();
    null_proj -= pinv * a;
  }

  Vector floor = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  if (f.positive_domain()) {
    for (Eigen::Index i = 0; i < n; ++i) floor[i] = std::min(1e-9, 0.5 * x[i]);
  }
  const Vector lower = poly.lower.cwiseMax(floor);

  auto max_step = [&](const Vector& d) {
    double t = radius;
    for (const auto& row : poly.rows) {
      if (row.equality) continue;
      const double ad = row.a.dot(d);
      if (ad > 1e-15) t = std::min(t, (row.b - row.a.dot(x)) / ad);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d[i] > 0.0 && std::isfinite(poly.upper[i])) t = std::min(t, (poly.upper[i] - x[i]) / d[i]);
      if (d[i] < 0.0 && std::isfinite(lower[i])) t = std::min(t, (lower[i] - x[i]) / d[i]);
    }
    return std::max(t, 0.0);
  };

  std::vector<PrimalPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 1)));
  out.push_back(anchor);

  auto push_ray = [&](Vector d, bool with_interior) {
    d = null_proj * d;
    const double norm = d.norm();
    if (norm < 1e-12) return;
    d /= norm;
    const double t = max_step(d);
    out.emplace_back(Vector(x + t * d));
    if (with_interior) out.emplace_back(Vector(x + uniform(rng, 0.0, 1.0) * t * d));
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    push_ray(Vector::Unit(n, i), false);
    push_ray(-Vector::Unit(n, i), false);
  }

  if (poly.rows.empty() && n <= 10) {
    const Vector lo = lower.cwiseMax((x.array() - radius).matrix());
    const Vector hi = poly.upper.cwiseMin((x.array() + radius).matrix());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = (mask >> i) & 1u ? hi[i] : lo[i];
      out.emplace_back(std::move(v));
    }
  }

  if (null_proj.norm() < 1e-12) return out;
  while (static_cast<int>(out.size()) < count) push_ray(unit_direction(rng, n), true);
  if (static_cast<int>(out.size()) > count && count > 0) out.resize(static_cast<std::size_t>(count));
  return out;
}

}  // namespace bregman
