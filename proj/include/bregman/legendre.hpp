#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "bregman/point.hpp"

namespace bregman {

enum class LegendreKind { SquaredNorm, PowerP, NegEntropy };

std::string_view to_string(LegendreKind kind);

/// A separable Legendre function on R^n.
///
///   SquaredNorm  f(x) = 1/2 |x|_2^2                 dom f = R^n
///   PowerP       f(x) = 1/p sum |x_i|^p   (p > 1)   dom f = R^n
///   NegEntropy   f(x) = sum x_i log x_i             dom f = (0, inf)^n
///
/// All three are separable, so the gradient, the conjugate and its gradient
/// act coordinate by coordinate. The scalar building blocks are exposed for
/// the projection and resolvent solvers.
class LegendreFunction {
 public:
  static LegendreFunction squared_norm(Eigen::Index dim);
  static LegendreFunction power_p(double p, Eigen::Index dim);
  static LegendreFunction neg_entropy(Eigen::Index dim);

  LegendreKind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return dim_; }
  /// Exponent p (2 for SquaredNorm, unused for NegEntropy).
  double p() const noexcept { return p_; }
  /// Conjugate exponent q = p / (p - 1).
  double q() const noexcept { return q_; }
  bool strongly_coercive() const noexcept { return true; }
  bool cofinite() const noexcept { return true; }
  /// True when dom f is the open positive orthant.
  bool positive_domain() const noexcept { return kind_ == LegendreKind::NegEntropy; }

  bool in_domain(const PrimalPoint& x) const;
  /// Throws DomainError unless x has the right dimension and lies in int(dom f).
  void require_domain(const PrimalPoint& x, std::string_view what) const;
  void require_dim(Eigen::Index n, std::string_view what) const;

  double value_1d(double t) const;
  double grad_1d(double t) const;
  double conj_1d(double s) const;
  double grad_conj_1d(double s) const;
  /// Per-coordinate Bregman distance d(a, b) = f(a) - f(b) - f'(b)(a - b).
  double distance_1d(double a, double b) const;

  friend bool operator==(const LegendreFunction&, const LegendreFunction&) = default;

 private:
  LegendreFunction(LegendreKind kind, double p, Eigen::Index dim);

  LegendreKind kind_;
  double p_;
  double q_;
  Eigen::Index dim_;
};

double eval(const LegendreFunction& f, const PrimalPoint& x);
DualPoint grad(const LegendreFunction& f, const PrimalPoint& x);
double conj(const LegendreFunction& f, const DualPoint& xstar);
PrimalPoint grad_conj(const LegendreFunction& f, const DualPoint& xstar);

/// D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>.
double bregman_distance(const LegendreFunction& f, const PrimalPoint& x, const PrimalPoint& y);

/// V_f(x, x*) = f(x) - <x*, x> + f*(x*), which equals D_f(x, grad f*(x*)).
double v_fun(const LegendreFunction& f, const PrimalPoint& x, const DualPoint& xstar);

/// grad f*( sum_i t_i grad f(x_i) ). Weights must be positive and sum to one
/// within `weight_tol`.
PrimalPoint dual_average(const LegendreFunction& f, std::span<const double> weights,
                         std::span<const PrimalPoint> points, double weight_tol = 1e-12);

struct TotalConvexityEstimate {
  PrimalPoint base;
  double radius = 0.0;
  double modulus = 0.0;
  int samples = 0;
};

/// Sampled upper bound on nu_f(x, t) = inf { D_f(y, x) : |y - x|_2 = t }.
/// In one dimension the sphere is the two points x - t, x + t, visited in turn.
TotalConvexityEstimate estimate_total_convexity_modulus(const LegendreFunction& f, const PrimalPoint& x,
                                                        double t, int samples, std::uint64_t seed = 42);

}  // namespace bregman
