#include "bregman/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bregman/random.hpp"

namespace bregman {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Weight: return "WeightError";
    case ErrorKind::Sample: return "SampleError";
    case ErrorKind::Infeasible: return "InfeasibleError";
    case ErrorKind::Convergence: return "ConvergenceError";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Schedule: return "ScheduleError";
    case ErrorKind::Monotonicity: return "MonotonicityViolation";
    case ErrorKind::Precondition: return "PreconditionError";
  }
  return "Error";
}

std::string_view to_string(LegendreKind kind) {
  switch (kind) {
    case LegendreKind::SquaredNorm: return "squared_norm";
    case LegendreKind::PowerP: return "power_p";
    case LegendreKind::NegEntropy: return "neg_entropy";
  }
  return "unknown";
}

namespace {

double sign(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

LegendreFunction::LegendreFunction(LegendreKind kind, double p, Eigen::Index dim)
    : kind_(kind), p_(p), q_(p / (p - 1.0)), dim_(dim) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
}

LegendreFunction LegendreFunction::squared_norm(Eigen::Index dim) {
  return LegendreFunction(LegendreKind::SquaredNorm, 2.0, dim);
}

LegendreFunction LegendreFunction::power_p(double p, Eigen::Index dim) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("power_p requires a finite p > 1, got " + std::to_string(p));
  return LegendreFunction(LegendreKind::PowerP, p, dim);
}

LegendreFunction LegendreFunction::neg_entropy(Eigen::Index dim) {
  return LegendreFunction(LegendreKind::NegEntropy, 2.0, dim);
}

bool LegendreFunction::in_domain(const PrimalPoint& x) const {
  if (x.dim() != dim_) return false;
  if (kind_ == LegendreKind::NegEntropy) return (x.coords().array() > 0.0).all();
  return true;
}

void LegendreFunction::require_dim(Eigen::Index n, std::string_view what) const {
  if (n != dim_) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(n) + " does not match geometry dimension " +
                      std::to_string(dim_));
  }
}

void LegendreFunction::require_domain(const PrimalPoint& x, std::string_view what) const {
  require_dim(x.dim(), what);
  if (!in_domain(x)) throw DomainError(std::string(what) + ": point outside int(dom f) (neg_entropy needs x > 0)");
}

double LegendreFunction::value_1d(double t) const {
  switch (kind_) {
    case LegendreKind::SquaredNorm: return 0.5 * t * t;
    case LegendreKind::PowerP: return std::pow(std::abs(t), p_) / p_;
    case LegendreKind::NegEntropy: return t * std::log(t);
  }
  return 0.0;
}

double LegendreFunction::grad_1d(double t) const {
  switch (kind_) {
    case LegendreKind::SquaredNorm: return t;
    case LegendreKind::PowerP: return sign(t) * std::pow(std::abs(t), p_ - 1.0);
    case LegendreKind::NegEntropy: return 1.0 + std::log(t);
  }
  return 0.0;
}

double LegendreFunction::conj_1d(double s) const {
  switch (kind_) {
    case LegendreKind::SquaredNorm: return 0.5 * s * s;
    case LegendreKind::PowerP: return std::pow(std::abs(s), q_) / q_;
    case LegendreKind::NegEntropy: return std::exp(s - 1.0);
  }
  return 0.0;
}

double LegendreFunction::grad_conj_1d(double s) const {
  switch (kind_) {
    case LegendreKind::SquaredNorm: return s;
    case LegendreKind::PowerP: return sign(s) * std::pow(std::abs(s), q_ - 1.0);
    case LegendreKind::NegEntropy: return std::exp(s - 1.0);
  }
  return 0.0;
}

double LegendreFunction::distance_1d(double a, double b) const {
  switch (kind_) {
    case LegendreKind::SquaredNorm: return 0.5 * (a - b) * (a - b);
    case LegendreKind::PowerP: {
      // |a|^p/p - |b|^p/p - g(b)(a - b), using g(b) b = |b|^p.
      const double bp = std::pow(std::abs(b), p_);
      return std::pow(std::abs(a), p_) / p_ + bp / q_ - grad_1d(b) * a;
    }
    case LegendreKind::NegEntropy: return a * std::log(a / b) - a + b;
  }
  return 0.0;
}

double eval(const LegendreFunction& f, const PrimalPoint& x) {
  f.require_domain(x, "eval");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.dim(); ++i) sum += f.value_1d(x[i]);
  return sum;
}

DualPoint grad(const LegendreFunction& f, const PrimalPoint& x) {
  f.require_domain(x, "grad");
  Vector g(x.dim());
  for (Eigen::Index i = 0; i < x.dim(); ++i) g[i] = f.grad_1d(x[i]);
  return DualPoint(std::move(g));
}

double conj(const LegendreFunction& f, const DualPoint& xstar) {
  f.require_dim(xstar.dim(), "conj");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < xstar.dim(); ++i) sum += f.conj_1d(xstar[i]);
  if (!std::isfinite(sum)) throw DomainError("conj: value overflows");
  return sum;
}

PrimalPoint grad_conj(const LegendreFunction& f, const DualPoint& xstar) {
  f.require_dim(xstar.dim(), "grad_conj");
  Vector x(xstar.dim());
  for (Eigen::Index i = 0; i < xstar.dim(); ++i) x[i] = f.grad_conj_1d(xstar[i]);
  if (!x.allFinite()) throw DomainError("grad_conj: value overflows");
  return PrimalPoint(std::move(x));
}

double bregman_distance(const LegendreFunction& f, const PrimalPoint& x, const PrimalPoint& y) {
  f.require_domain(x, "bregman_distance(x)");
  f.require_domain(y, "bregman_distance(y)");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.dim(); ++i) sum += f.distance_1d(x[i], y[i]);
  return sum;
}

double v_fun(const LegendreFunction& f, const PrimalPoint& x, const DualPoint& xstar) {
  return eval(f, x) - pair(xstar, x) + conj(f, xstar);
}

PrimalPoint dual_average(const LegendreFunction& f, std::span<const double> weights,
                         std::span<const PrimalPoint> points, double weight_tol) {
  if (weights.empty() || weights.size() != points.size()) {
    throw WeightError("dual_average: need one weight per point and at least one point");
  }
  double total = 0.0;
  for (double t : weights) {
    if (!(t > 0.0)) throw WeightError("dual_average: weights must be positive");
    total += t;
  }
  if (std::abs(total - 1.0) > weight_tol) {
    throw WeightError("dual_average: weights sum to " + std::to_string(total) + ", not 1");
  }
  Vector acc = Vector::Zero(f.dim());
  for (std::size_t k = 0; k < points.size(); ++k) acc += weights[k] * grad(f, points[k]).coords();
  return grad_conj(f, DualPoint(std::move(acc)));
}

TotalConvexityEstimate estimate_total_convexity_modulus(const LegendreFunction& f, const PrimalPoint& x, double t,
                                                        int samples, std::uint64_t seed) {
  f.require_domain(x, "estimate_total_convexity_modulus");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("estimate_total_convexity_modulus: radius must be >= 0");
  if (samples < 1) throw SampleError("estimate_total_convexity_modulus: need at least one sample");

  TotalConvexityEstimate est{x, t, 0.0, 0};
  if (t == 0.0) {
    est.samples = samples;
    return est;
  }

  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Vector dir;
    if (f.dim() == 1) {
      dir = Vector::Constant(1, k % 2 == 0 ? 1.0 : -1.0);
    } else {
      dir = unit_direction(rng, f.dim());
    }
    const Vector y = x.coords() + t * dir;
    if (f.positive_domain() && !(y.array() > 0.0).all()) continue;
    best = std::min(best, bregman_distance(f, PrimalPoint(y), x));
    ++est.samples;
  }
  if (est.samples == 0) throw SampleError("estimate_total_convexity_modulus: no sampled point lies in dom f");
  est.modulus = std::max(0.0, best);
  return est;
}

}  // namespace bregman
