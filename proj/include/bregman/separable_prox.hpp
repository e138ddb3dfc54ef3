#pragma once

#include <vector>

#include "bregman/convex_set.hpp"

namespace bregman {

/// Strictly convex separable kernel K(y) = sum_i k(y_i) known only through
/// the inverse of its scalar derivative.
///
///   legendre(f):      k = f_1d                 (Bregman projections / proxes)
///   shifted(f, tau):  k = tau f_1d + t^2 / 2   (Euclidean backward steps
///                                               that keep f implicit)
class SeparableKernel {
 public:
  static SeparableKernel legendre(const LegendreFunction& f) { return SeparableKernel(f, 0.0); }
  static SeparableKernel shifted(const LegendreFunction& f, double tau) { return SeparableKernel(f, tau); }

  /// (k')^{-1}(s).
  double inverse_gradient(double s) const;
  /// k'(t).
  double gradient(double t) const;
  bool positive_domain() const noexcept { return f_.positive_domain(); }
  const LegendreFunction& geometry() const noexcept { return f_; }

 private:
  SeparableKernel(const LegendreFunction& f, double tau) : f_(f), tau_(tau) {}

  LegendreFunction f_;
  double tau_;  // 0 selects the plain Legendre kernel
};

struct ProxSolution {
  Vector point;
  std::vector<double> multipliers;
  int sweeps = 0;
  double residual = 0.0;
};

/// argmin over y in P of  K(y) - <s, y> + sum_i w_i |y_i|.
///
/// Bounds and the l1 term are handled coordinatewise in closed form; linear
/// rows by exact dual coordinate ascent (one monotone scalar equation per
/// row, solved by bisection). With one row this is a single scalar solve;
/// with several it is the cyclic Bregman projection scheme with dual
/// corrections. `l1` may be empty.
ProxSolution solve_separable_prox(const SeparableKernel& kernel, const Vector& s, const Vector& l1,
                                  const Polyhedron& poly, double tol, int max_sweeps = 100000);

}  // namespace bregman
