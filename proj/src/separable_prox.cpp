#include "bregman/separable_prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bregman/scalar_root.hpp"

namespace bregman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double SeparableKernel::gradient(double t) const {
  if (tau_ == 0.0) return f_.grad_1d(t);
  return tau_ * f_.grad_1d(t) + t;
}

double SeparableKernel::inverse_gradient(double s) const {
  if (tau_ == 0.0) return f_.grad_conj_1d(s);

  switch (f_.kind()) {
    case LegendreKind::SquaredNorm:
      return s / (1.0 + tau_);

    case LegendreKind::PowerP: {
      // tau |y|^{p-1} + |y| = |s| has its root in [0, |s|].
      if (s == 0.0) return 0.0;
      const double m = std::abs(s);
      const double p = f_.p();
      const double tau = tau_;
      auto fn = [m, p, tau](double y) {
        const double v = tau * std::pow(y, p - 1.0) + y - m;
        const double d = y > 0.0 ? tau * (p - 1.0) * std::pow(y, p - 2.0) + 1.0 : kInf;
        return std::pair{v, d};
      };
      const double y = detail::safeguarded_newton(fn, 0.0, m);
      return s > 0.0 ? y : -y;
    }

    case LegendreKind::NegEntropy: {
      // In u = log y:  tau (1 + u) + e^u = s, increasing in u.
      const double tau = tau_;
      auto fn = [s, tau](double u) {
        const double e = std::exp(u);
        return std::pair{tau * (1.0 + u) + e - s, tau + e};
      };
      const double hi = std::log(std::max(s, 1.0));
      double lo = hi - 1.0;
      for (double step = 1.0; fn(lo).first > 0.0; step *= 2.0) {
        lo -= step;
        if (lo < -1e6) throw DomainError("shifted neg_entropy kernel: root underflows");
      }
      return std::exp(detail::safeguarded_newton(fn, lo, hi));
    }
  }
  return 0.0;
}

namespace {

class ProxEvaluator {
 public:
  ProxEvaluator(const SeparableKernel& kernel, const Vector& s, const Vector& l1, const Polyhedron& poly)
      : kernel_(kernel), s_(s), l1_(l1), poly_(poly) {}

  double coord(Eigen::Index i, double shift) const {
    const double si = s_[i] - shift;
    const double w = l1_.size() > 0 ? l1_[i] : 0.0;
    double u;
    if (w == 0.0) {
      u = kernel_.inverse_gradient(si);
    } else if (kernel_.positive_domain()) {
      u = kernel_.inverse_gradient(si - w);
    } else if (si > w) {
      u = kernel_.inverse_gradient(si - w);
    } else if (si < -w) {
      u = kernel_.inverse_gradient(si + w);
    } else {
      u = 0.0;
    }
    return std::clamp(u, poly_.lower[i], poly_.upper[i]);
  }

  Vector point(const Vector& shift) const {
    Vector y(s_.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = coord(i, shift[i]);
    return y;
  }

  /// a . y(base + mu a) - b, non-increasing in mu.
  double row_gap(const LinearConstraint& row, const Vector& base, double mu) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      if (row.a[i] == 0.0) continue;
      acc += row.a[i] * coord(i, base[i] + mu * row.a[i]);
    }
    const double gap = acc - row.b;
    if (std::isnan(gap)) throw ConvergenceError("dual row solve produced a non-finite value", kInf);
    return gap;
  }

 private:
  const SeparableKernel& kernel_;
  const Vector& s_;
  const Vector& l1_;
  const Polyhedron& poly_;
};

/// Multiplier that makes row `row` hold (active, or inactive with mu = 0).
double solve_row(const ProxEvaluator& ev, const LinearConstraint& row, const Vector& base) {
  auto gap = [&](double mu) { return ev.row_gap(row, base, mu); };
  const double g0 = gap(0.0);
  if (g0 == 0.0 || (!row.equality && g0 < 0.0)) return 0.0;

  double lo = 0.0, hi = 0.0;
  if (g0 > 0.0) {
    hi = 1.0;
    while (gap(hi) > 0.0) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e300) throw InfeasibleError("constraint row cannot be satisfied inside dom f");
    }
  } else {
    lo = -1.0;
    while (gap(lo) < 0.0) {
      hi = lo;
      lo *= 4.0;
      if (lo < -1e300) throw InfeasibleError("constraint row cannot be satisfied inside dom f");
    }
  }
  const auto [a, b] = detail::bisect_decreasing(gap, lo, hi, 0.0);
  if (!row.equality) return b;  // feasible side
  return std::abs(gap(a)) < std::abs(gap(b)) ? a : b;
}

double kkt_residual(const Polyhedron& poly, const Vector& y, const std::vector<double>& lambda) {
  double worst = 0.0;
  for (std::size_t j = 0; j < poly.rows.size(); ++j) {
    const auto& row = poly.rows[j];
    const double r = row.a.dot(y) - row.b;
    const double norm = row.a.norm();
    if (row.equality) {
      worst = std::max(worst, std::abs(r) / norm);
    } else {
      worst = std::max(worst, std::max(0.0, r) / norm);
      worst = std::max(worst, lambda[j] * std::max(0.0, -r));
    }
  }
  return worst;
}

}  // namespace

ProxSolution solve_separable_prox(const SeparableKernel& kernel, const Vector& s, const Vector& l1,
                                  const Polyhedron& poly, double tol, int max_sweeps) {
  const Eigen::Index n = s.size();
  if (poly.dim() != n || (l1.size() != 0 && l1.size() != n)) {
    throw DomainError("separable prox: dimension mismatch");
  }
  if ((poly.lower.array() > poly.upper.array()).any()) throw InfeasibleError("empty coordinate bounds");
  if (kernel.positive_domain() && (poly.upper.array() <= 0.0).any()) {
    throw InfeasibleError("coordinate bounds do not meet the positive orthant");
  }

  ProxEvaluator ev(kernel, s, l1, poly);
  const std::size_t m = poly.rows.size();
  ProxSolution sol;
  sol.multipliers.assign(m, 0.0);
  Vector shift = Vector::Zero(n);

  if (m == 0) {
    sol.point = ev.point(shift);
    return sol;
  }

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& row = poly.rows[j];
      const Vector base = shift - sol.multipliers[j] * row.a;
      const double mu = solve_row(ev, row, base);
      sol.multipliers[j] = mu;
      shift = base + mu * row.a;
    }
    sol.point = ev.point(shift);
    sol.sweeps = sweep;
    sol.residual = kkt_residual(poly, sol.point, sol.multipliers);
    if (m == 1 || sol.residual <= tol * (1.0 + sol.point.cwiseAbs().maxCoeff())) return sol;
  }
  throw ConvergenceError("cyclic dual projection did not converge in " + std::to_string(max_sweeps) + " sweeps",
                         sol.residual);
}

}  // namespace bregman
