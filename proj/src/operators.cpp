#include "bregman/operators.hpp"

#include <string>

#include "bregman/overloaded.hpp"
#include "bregman/sampling.hpp"

namespace bregman {

using detail::overloaded;

namespace {

PrimalPoint domain_hint(const LegendreFunction& f) {
  return PrimalPoint(f.positive_domain() ? Vector::Ones(f.dim()) : Vector::Zero(f.dim()));
}

void require_fixed(const LegendreFunction& f, const BsneMapping& T, const PrimalPoint& p, std::string_view what) {
  const double r = fixed_point_residual(f, T, p).sup_norm;
  if (!(r <= kWitnessTol)) {
    throw PreconditionError(std::string(what) + ": witness is not a fixed point (residual " + std::to_string(r) + ")");
  }
}

}  // namespace

BsneMapping BsneMapping::projection(const LegendreFunction& f, ConvexSet set,
                                    const std::optional<PrimalPoint>& witness) {
  f.require_dim(set.dim(), "projection mapping");
  PrimalPoint w = witness ? *witness : feasible_point(set, f, domain_hint(f));
  f.require_domain(w, "projection mapping witness");
  BsneMapping T(f, Projection{std::move(set)}, w);
  require_fixed(f, T, w, "projection mapping");
  return T;
}

BsneMapping BsneMapping::resolvent(const LegendreFunction& f, Bifunction theta, ConvexFunctional phi, ConvexSet set,
                                   const PrimalPoint& witness, ResolventOptions opts) {
  f.require_domain(witness, "resolvent mapping witness");
  auto solver = std::make_shared<const ResolventSolver>(f, std::move(theta), std::move(phi), std::move(set), opts);
  BsneMapping T(f, Resolvent{std::move(solver)}, witness);
  require_fixed(f, T, witness, "resolvent mapping");
  return T;
}

BsneMapping BsneMapping::composition(std::vector<BsneMapping> members, const std::optional<PrimalPoint>& witness) {
  if (members.empty()) throw PreconditionError("composition: member list must be nonempty");
  const LegendreFunction f = members.front().geometry();
  for (const auto& m : members) {
    if (!(m.geometry() == f)) throw PreconditionError("composition: members use different geometries");
  }

  auto common = [&](const PrimalPoint& p) {
    for (const auto& m : members) {
      if (!(fixed_point_residual(f, m, p).sup_norm <= kWitnessTol)) return false;
    }
    return true;
  };

  std::optional<PrimalPoint> chosen = witness;
  if (!chosen) {
    for (const auto& m : members) {
      if (common(m.witness())) {
        chosen = m.witness();
        break;
      }
    }
  }
  if (!chosen || !common(*chosen)) throw PreconditionError("composition: no certified common fixed point");
  PrimalPoint w = *chosen;
  return BsneMapping(f, Composition{std::move(members)}, std::move(w));
}

std::string_view BsneMapping::type_name() const {
  return std::visit(overloaded{
                        [](const Projection&) { return std::string_view("projection"); },
                        [](const Resolvent&) { return std::string_view("resolvent"); },
                        [](const Composition&) { return std::string_view("composition"); },
                    },
                    v_);
}

PrimalPoint apply(const BsneMapping& T, const PrimalPoint& x) {
  return std::visit(overloaded{
                        [&](const BsneMapping::Projection& p) { return bregman_project(T.geometry(), p.set, x).point; },
                        [&](const BsneMapping::Resolvent& r) { return r.solver->solve(x).point; },
                        [&](const BsneMapping::Composition& c) {
                          PrimalPoint cur = x;
                          for (const auto& m : c.members) cur = apply(m, cur);
                          return cur;
                        },
                    },
                    T.variant());
}

FixedPointResidual fixed_point_residual(const LegendreFunction& f, const BsneMapping& T, const PrimalPoint& x) {
  const PrimalPoint tx = apply(T, x);
  return {bregman_distance(f, x, tx), max_abs_diff(x, tx)};
}

double quasi_bregman_check(const LegendreFunction& f, const BsneMapping& T, const PrimalPoint& p,
                           const PrimalPoint& x) {
  require_fixed(f, T, p, "quasi_bregman_check");
  return bregman_distance(f, p, apply(T, x)) - bregman_distance(f, p, x);
}

}  // namespace bregman
