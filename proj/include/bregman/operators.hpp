#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "bregman/equilibrium.hpp"

namespace bregman {

/// Bregman strongly nonexpansive mapping: a set projection, a mixed
/// resolvent, or a finite composition of these.
///
/// Every instance carries a certified fixed point (its witness), so F(T) is
/// never empty. A composition of members [T1, ..., TN] applies T1 first,
/// i.e. it is TN o ... o T1.
class BsneMapping {
 public:
  struct Projection {
    ConvexSet set;
  };
  struct Resolvent {
    std::shared_ptr<const ResolventSolver> solver;
  };
  struct Composition {
    std::vector<BsneMapping> members;
  };
  using Variant = std::variant<Projection, Resolvent, Composition>;

  /// Any point of `set` is fixed; without a witness a feasible point is derived.
  static BsneMapping projection(const LegendreFunction& f, ConvexSet set,
                                const std::optional<PrimalPoint>& witness = std::nullopt);
  /// `witness` must solve the mixed equilibrium problem (it is then fixed).
  static BsneMapping resolvent(const LegendreFunction& f, Bifunction theta, ConvexFunctional phi, ConvexSet set,
                               const PrimalPoint& witness, ResolventOptions opts = {});
  /// Without a witness, the first member witness fixed by every member is used.
  static BsneMapping composition(std::vector<BsneMapping> members,
                                 const std::optional<PrimalPoint>& witness = std::nullopt);

  const LegendreFunction& geometry() const noexcept { return f_; }
  const PrimalPoint& witness() const noexcept { return witness_; }
  const Variant& variant() const noexcept { return v_; }
  std::string_view type_name() const;

 private:
  BsneMapping(LegendreFunction f, Variant v, PrimalPoint witness)
      : f_(std::move(f)), v_(std::move(v)), witness_(std::move(witness)) {}

  LegendreFunction f_;
  Variant v_;
  PrimalPoint witness_;
};

/// Tolerance (sup norm) a witness must meet to count as a fixed point.
inline constexpr double kWitnessTol = 1e-9;

PrimalPoint apply(const BsneMapping& T, const PrimalPoint& x);

struct FixedPointResidual {
  double bregman = 0.0;   // D_f(x, T x)
  double sup_norm = 0.0;  // |x - T x|_inf
};

FixedPointResidual fixed_point_residual(const LegendreFunction& f, const BsneMapping& T, const PrimalPoint& x);

/// D_f(p, T x) - D_f(p, x) for a certified fixed point p; <= tol certifies
/// quasi-Bregman nonexpansiveness at x.
double quasi_bregman_check(const LegendreFunction& f, const BsneMapping& T, const PrimalPoint& p,
                           const PrimalPoint& x);

}  // namespace bregman
