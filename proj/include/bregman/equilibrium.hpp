#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bregman/convex_set.hpp"

namespace bregman {

namespace functionals {

struct Zero {};

/// 1/2 <Q x, x> + <r, x> + s with Q symmetric positive semidefinite.
struct Quadratic {
  Matrix Q;
  Vector r;
  double s = 0.0;
};

/// sum_i w_i |x_i| with w >= 0.
struct WeightedL1 {
  Vector w;
};

}  // namespace functionals

/// Convex functional used both as the penalty phi and as the potential g of
/// optimization-induced bifunctions.
class ConvexFunctional {
 public:
  using Variant = std::variant<functionals::Zero, functionals::Quadratic, functionals::WeightedL1>;

  static ConvexFunctional zero();
  static ConvexFunctional quadratic(Matrix Q, Vector r, double s = 0.0);
  static ConvexFunctional weighted_l1(Vector w);

  double value(const PrimalPoint& x) const;
  const Variant& variant() const noexcept { return v_; }
  std::string_view type_name() const;
  /// Dimension fixed by the data, or nullopt for Zero.
  std::optional<Eigen::Index> dim() const;

  /// Smooth part as an affine gradient map x -> H x + h (zero when absent).
  Matrix smooth_hessian(Eigen::Index n) const;
  Vector smooth_gradient_offset(Eigen::Index n) const;
  /// Weights of the nonsmooth l1 part (zero when absent).
  Vector l1_weights(Eigen::Index n) const;

 private:
  explicit ConvexFunctional(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace bifunctions {

/// Theta(x, y) = g(y) - g(x).
struct OptimizationInduced {
  ConvexFunctional g;
};

/// Theta(x, y) = <M x + c, y - x>.
struct OperatorInduced {
  Matrix M;
  Vector c;
};

}  // namespace bifunctions

/// Equilibrium bifunction Theta: C x C -> R from one of two constructive
/// families. Both satisfy (A1) exactly and are continuous in each argument.
/// Operator-induced bifunctions record whether M has a positive semidefinite
/// symmetric part; a non-monotone one can be built (so the validator can
/// flag it) but has no resolvent.
class Bifunction {
 public:
  using Variant = std::variant<bifunctions::OptimizationInduced, bifunctions::OperatorInduced>;

  static Bifunction optimization(ConvexFunctional g);
  static Bifunction operator_induced(Matrix M, Vector c);

  double operator()(const PrimalPoint& x, const PrimalPoint& y) const;
  const Variant& variant() const noexcept { return v_; }
  std::string_view type_name() const;
  std::optional<Eigen::Index> dim() const;
  bool is_monotone() const noexcept { return monotone_; }

  /// Monotone affine map G with the same solutions as Theta: grad g for the
  /// optimization family (smooth part), M x + c for the operator family.
  Matrix operator_matrix(Eigen::Index n) const;
  Vector operator_offset(Eigen::Index n) const;
  /// l1 weights carried by g (optimization family only).
  Vector l1_weights(Eigen::Index n) const;

 private:
  Bifunction(Variant v, bool monotone) : v_(std::move(v)), monotone_(monotone) {}
  Variant v_;
  bool monotone_;
};

double theta_eval(const Bifunction& theta, const PrimalPoint& x, const PrimalPoint& y);

struct ConditionCheck {
  std::string name;
  bool checked = true;
  double worst_violation = 0.0;
  bool passed = true;
  std::string note;
};

struct BlumOettliReport {
  std::vector<ConditionCheck> conditions;
  int samples = 0;
  bool passed = true;

  const ConditionCheck& condition(std::string_view name) const;
};

/// Sampled check of (A1), (A2) and (A4) over C. (A3) and (A5) hold by
/// construction for both families and are recorded as such.
BlumOettliReport validate_blum_oettli(const Bifunction& theta, const ConvexSet& set, int samples, double tol,
                                      std::uint64_t seed = 42);

struct ResolventResult {
  PrimalPoint point;
  int inner_iterations = 0;
  double vi_residual = 0.0;
};

struct ResolventOptions {
  double tol = 1e-8;
  int max_iterations = 100000;
  int vi_samples = 64;
  double vi_radius = 1.0;
  std::uint64_t seed = 42;
};

/// Mixed resolvent Res^f_{Theta,phi}: the unique z in C with
///   Theta(z, y) + phi(y) + <grad f(z) - grad f(x), y - z> >= phi(z)  for all y in C.
///
/// The data is flattened once at construction; `solve` may then be called
/// from many threads. Paths:
///   - no coupling operator: one Bregman prox, exact;
///   - squared norm, affine operator, no constraints or l1 term: one linear solve;
///   - otherwise a forward-backward-forward (Tseng) loop whose backward step
///     keeps grad f implicit, so flat or steep gradients never enter an
///     explicit step.
class ResolventSolver {
 public:
  ResolventSolver(LegendreFunction f, Bifunction theta, ConvexFunctional phi, ConvexSet set,
                  ResolventOptions opts = {});

  ResolventResult solve(const PrimalPoint& x, const std::optional<PrimalPoint>& warm_start = std::nullopt) const;

  const LegendreFunction& geometry() const noexcept { return f_; }
  const Bifunction& bifunction() const noexcept { return theta_; }
  const ConvexFunctional& penalty() const noexcept { return phi_; }
  const ConvexSet& set() const noexcept { return set_; }
  const ResolventOptions& options() const noexcept { return opts_; }

 private:
  LegendreFunction f_;
  Bifunction theta_;
  ConvexFunctional phi_;
  ConvexSet set_;
  ResolventOptions opts_;
  Polyhedron poly_;
  Matrix op_;      // G(z) = op_ z + offset_
  Vector offset_;
  Vector l1_;
  double lipschitz_;
  bool linear_path_;
};

ResolventResult mixed_resolvent(const LegendreFunction& f, const Bifunction& theta, const ConvexFunctional& phi,
                                const ConvexSet& set, const PrimalPoint& x, double tol = 1e-8,
                                const std::optional<PrimalPoint>& warm_start = std::nullopt);

/// max over sampled y in C of  phi(z) - Theta(z, y) - phi(y) - <grad f(z) - grad f(x), y - z>.
/// Positive values are violations of the resolvent inequality.
double verify_resolvent_vi(const LegendreFunction& f, const Bifunction& theta, const ConvexFunctional& phi,
                           const ConvexSet& set, const PrimalPoint& z, const PrimalPoint& x, int samples,
                           std::uint64_t seed = 42, double radius = 1.0);

using PointMap = std::function<PrimalPoint(const PrimalPoint&)>;

/// D(Tx,Ty) + D(Ty,Tx) + D(Tx,x) + D(Ty,y) - D(Tx,y) - D(Ty,x); <= 0 when the
/// firm nonexpansiveness inequality holds at (x, y).
double bfne_check(const LegendreFunction& f, const PointMap& T, const PrimalPoint& x, const PrimalPoint& y);

}  // namespace bregman
