#include "bregman/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bregman/overloaded.hpp"
#include "bregman/random.hpp"
#include "bregman/sampling.hpp"
#include "bregman/separable_prox.hpp"

namespace bregman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::overloaded;

void require_normal(const Vector& a, double b, const char* what) {
  if (a.size() < 1) throw DomainError(std::string(what) + ": empty coefficient vector");
  if (!a.allFinite() || !std::isfinite(b)) throw DomainError(std::string(what) + ": non-finite data");
  if (a.cwiseAbs().maxCoeff() == 0.0) throw DomainError(std::string(what) + ": coefficient vector a must be nonzero");
}

}  // namespace

ConvexSet ConvexSet::whole_space(Eigen::Index dim) {
  if (dim < 1) throw DomainError("whole_space: dimension must be at least 1");
  return ConvexSet(sets::WholeSpace{dim}, dim);
}

ConvexSet ConvexSet::halfspace(Vector a, double b) {
  require_normal(a, b, "halfspace");
  const auto n = a.size();
  return ConvexSet(sets::Halfspace{std::move(a), b}, n);
}

ConvexSet ConvexSet::hyperplane(Vector a, double b) {
  require_normal(a, b, "hyperplane");
  const auto n = a.size();
  return ConvexSet(sets::Hyperplane{std::move(a), b}, n);
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) throw DomainError("box: bound vectors must match in size");
  if (lower.hasNaN() || upper.hasNaN()) throw DomainError("box: NaN bound");
  if ((lower.array() > upper.array()).any()) throw DomainError("box: lower must be <= upper componentwise");
  if ((lower.array() == kInf).any() || (upper.array() == -kInf).any()) throw DomainError("box: empty bound interval");
  const auto n = lower.size();
  return ConvexSet(sets::Box{std::move(lower), std::move(upper)}, n);
}

ConvexSet ConvexSet::simplex(Eigen::Index dim, double radius) {
  if (dim < 1) throw DomainError("simplex: dimension must be at least 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("simplex: radius must be positive");
  return ConvexSet(sets::Simplex{dim, radius}, dim);
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> members, Vector witness) {
  if (members.empty()) throw DomainError("intersection: member list must be nonempty");
  const auto n = members.front().dim();
  for (const auto& m : members) {
    if (m.dim() != n) throw DomainError("intersection: members differ in dimension");
  }
  if (witness.size() != n) throw DomainError("intersection: witness has the wrong dimension");
  const PrimalPoint w(witness);
  for (const auto& m : members) {
    if (!contains(m, w, 1e-9)) throw InfeasibleError("intersection: witness is not in every member");
  }
  return ConvexSet(sets::Intersection{std::move(members), std::move(witness)}, n);
}

std::string_view ConvexSet::type_name() const {
  return std::visit(overloaded{
                        [](const sets::WholeSpace&) { return std::string_view("whole_space"); },
                        [](const sets::Halfspace&) { return std::string_view("halfspace"); },
                        [](const sets::Hyperplane&) { return std::string_view("hyperplane"); },
                        [](const sets::Box&) { return std::string_view("box"); },
                        [](const sets::Simplex&) { return std::string_view("simplex"); },
                        [](const sets::Intersection&) { return std::string_view("intersection"); },
                    },
                    v_);
}

bool contains(const ConvexSet& set, const PrimalPoint& x, double tol) {
  if (x.dim() != set.dim()) return false;
  const Vector& v = x.coords();
  return std::visit(overloaded{
                        [](const sets::WholeSpace&) { return true; },
                        [&](const sets::Halfspace& h) { return h.a.dot(v) <= h.b + tol; },
                        [&](const sets::Hyperplane& h) { return std::abs(h.a.dot(v) - h.b) <= tol; },
                        [&](const sets::Box& b) {
                          return ((v.array() >= b.lower.array() - tol) && (v.array() <= b.upper.array() + tol)).all();
                        },
                        [&](const sets::Simplex& s) {
                          return (v.array() >= -tol).all() && std::abs(v.sum() - s.radius) <= tol;
                        },
                        [&](const sets::Intersection& in) {
                          return std::all_of(in.members.begin(), in.members.end(),
                                             [&](const ConvexSet& m) { return contains(m, x, tol); });
                        },
                    },
                    set.variant());
}

bool Polyhedron::has_bounds() const {
  return (lower.array() > -kInf).any() || (upper.array() < kInf).any();
}

namespace {

void flatten_into(const ConvexSet& set, Polyhedron& poly) {
  std::visit(overloaded{
                 [](const sets::WholeSpace&) {},
                 [&](const sets::Halfspace& h) { poly.rows.push_back({h.a, h.b, false}); },
                 [&](const sets::Hyperplane& h) { poly.rows.push_back({h.a, h.b, true}); },
                 [&](const sets::Box& b) {
                   poly.lower = poly.lower.cwiseMax(b.lower);
                   poly.upper = poly.upper.cwiseMin(b.upper);
                 },
                 [&](const sets::Simplex& s) {
                   poly.lower = poly.lower.cwiseMax(Vector::Zero(s.dim));
                   poly.rows.push_back({Vector::Ones(s.dim), s.radius, true});
                 },
                 [&](const sets::Intersection& in) {
                   for (const auto& m : in.members) flatten_into(m, poly);
                 },
             },
             set.variant());
}

}  // namespace

Polyhedron flatten(const ConvexSet& set) {
  Polyhedron poly{Vector::Constant(set.dim(), -kInf), Vector::Constant(set.dim(), kInf), {}};
  flatten_into(set, poly);
  if ((poly.lower.array() > poly.upper.array()).any()) throw InfeasibleError("flattened bounds are empty");
  return poly;
}

ProjectionResult bregman_project(const LegendreFunction& f, const ConvexSet& set, const PrimalPoint& x, double tol) {
  f.require_domain(x, "bregman_project");
  f.require_dim(set.dim(), "bregman_project(set)");

  if (set.is_whole_space()) return {x, {}, 0, 0.0};
  if (contains(set, x, 0.0)) return {x, std::vector<double>(flatten(set).rows.size(), 0.0), 0, 0.0};

  if (const auto* s = std::get_if<sets::Simplex>(&set.variant()); s && f.kind() == LegendreKind::NegEntropy) {
    // grad f*(grad f(x) - lambda 1) = x e^{-lambda}: the projection is a rescaling.
    const double total = x.coords().sum();
    return {PrimalPoint(x.coords() * (s->radius / total)), {std::log(total / s->radius)}, 0, 0.0};
  }

  const Polyhedron poly = flatten(set);
  const auto kernel = SeparableKernel::legendre(f);
  ProxSolution sol = solve_separable_prox(kernel, grad(f, x).coords(), Vector(), poly, tol);
  PrimalPoint z(std::move(sol.point));
  if (!f.in_domain(z)) throw InfeasibleError("bregman_project: projection leaves int(dom f)");
  return {std::move(z), std::move(sol.multipliers), sol.sweeps, sol.residual};
}

double verify_projection_optimality(const LegendreFunction& f, const ConvexSet& set, const PrimalPoint& z,
                                    const PrimalPoint& x, int samples, std::uint64_t seed, double radius) {
  Rng rng(seed);
  const Vector g = grad(f, x).coords() - grad(f, z).coords();
  double worst = 0.0;
  for (const auto& y : sample_set_points(set, f, z, samples, rng, radius)) {
    worst = std::max(worst, g.dot(y.coords() - z.coords()));
  }
  return worst;
}

}  // namespace bregman
