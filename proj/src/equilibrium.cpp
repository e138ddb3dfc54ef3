#include "bregman/equilibrium.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bregman/overloaded.hpp"
#include "bregman/random.hpp"
#include "bregman/sampling.hpp"
#include "bregman/separable_prox.hpp"

namespace bregman {

using detail::overloaded;

namespace {

constexpr double kPsdFloor = -1e-10;

double min_symmetric_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(got) + " does not match " +
                      std::to_string(want));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexFunctional

ConvexFunctional ConvexFunctional::zero() { return ConvexFunctional(functionals::Zero{}); }

ConvexFunctional ConvexFunctional::quadratic(Matrix Q, Vector r, double s) {
  if (Q.rows() < 1 || Q.rows() != Q.cols() || r.size() != Q.rows()) {
    throw DomainError("quadratic: Q must be square and match r");
  }
  if (!Q.allFinite() || !r.allFinite() || !std::isfinite(s)) throw DomainError("quadratic: non-finite data");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw DomainError("quadratic: Q must be symmetric");
  }
  if (min_symmetric_eigenvalue(Q) < kPsdFloor) throw DomainError("quadratic: Q must be positive semidefinite");
  return ConvexFunctional(functionals::Quadratic{std::move(Q), std::move(r), s});
}

ConvexFunctional ConvexFunctional::weighted_l1(Vector w) {
  if (w.size() < 1 || !w.allFinite()) throw DomainError("weighted_l1: weights must be finite");
  if ((w.array() < 0.0).any()) throw DomainError("weighted_l1: weights must be nonnegative");
  return ConvexFunctional(functionals::WeightedL1{std::move(w)});
}

double ConvexFunctional::value(const PrimalPoint& x) const {
  const Vector& v = x.coords();
  return std::visit(overloaded{
                        [](const functionals::Zero&) { return 0.0; },
                        [&](const functionals::Quadratic& q) {
                          require_dim(v.size(), q.r.size(), "quadratic");
                          return 0.5 * v.dot(q.Q * v) + q.r.dot(v) + q.s;
                        },
                        [&](const functionals::WeightedL1& l) {
                          require_dim(v.size(), l.w.size(), "weighted_l1");
                          return l.w.dot(v.cwiseAbs());
                        },
                    },
                    v_);
}

std::string_view ConvexFunctional::type_name() const {
  return std::visit(overloaded{
                        [](const functionals::Zero&) { return std::string_view("zero"); },
                        [](const functionals::Quadratic&) { return std::string_view("quadratic"); },
                        [](const functionals::WeightedL1&) { return std::string_view("weighted_l1"); },
                    },
                    v_);
}

std::optional<Eigen::Index> ConvexFunctional::dim() const {
  return std::visit(overloaded{
                        [](const functionals::Zero&) -> std::optional<Eigen::Index> { return std::nullopt; },
                        [](const functionals::Quadratic& q) -> std::optional<Eigen::Index> { return q.r.size(); },
                        [](const functionals::WeightedL1& l) -> std::optional<Eigen::Index> { return l.w.size(); },
                    },
                    v_);
}

Matrix ConvexFunctional::smooth_hessian(Eigen::Index n) const {
  if (const auto* q = std::get_if<functionals::Quadratic>(&v_)) {
    require_dim(q->r.size(), n, "quadratic");
    return q->Q;
  }
  return Matrix::Zero(n, n);
}

Vector ConvexFunctional::smooth_gradient_offset(Eigen::Index n) const {
  if (const auto* q = std::get_if<functionals::Quadratic>(&v_)) {
    require_dim(q->r.size(), n, "quadratic");
    return q->r;
  }
  return Vector::Zero(n);
}

Vector ConvexFunctional::l1_weights(Eigen::Index n) const {
  if (const auto* l = std::get_if<functionals::WeightedL1>(&v_)) {
    require_dim(l->w.size(), n, "weighted_l1");
    return l->w;
  }
  return Vector::Zero(n);
}

// ---------------------------------------------------------------------------
// Bifunction

Bifunction Bifunction::optimization(ConvexFunctional g) {
  return Bifunction(bifunctions::OptimizationInduced{std::move(g)}, true);
}

Bifunction Bifunction::operator_induced(Matrix M, Vector c) {
  if (M.rows() < 1 || M.rows() != M.cols() || c.size() != M.rows()) {
    throw DomainError("operator bifunction: M must be square and match c");
  }
  if (!M.allFinite() || !c.allFinite()) throw DomainError("operator bifunction: non-finite data");
  const bool monotone = min_symmetric_eigenvalue(M) >= kPsdFloor;
  return Bifunction(bifunctions::OperatorInduced{std::move(M), std::move(c)}, monotone);
}

double Bifunction::operator()(const PrimalPoint& x, const PrimalPoint& y) const {
  return std::visit(overloaded{
                        [&](const bifunctions::OptimizationInduced& o) { return o.g.value(y) - o.g.value(x); },
                        [&](const bifunctions::OperatorInduced& o) {
                          require_dim(x.dim(), o.c.size(), "operator bifunction");
                          require_dim(y.dim(), o.c.size(), "operator bifunction");
                          return (o.M * x.coords() + o.c).dot(y.coords() - x.coords());
                        },
                    },
                    v_);
}

std::string_view Bifunction::type_name() const {
  return std::holds_alternative<bifunctions::OptimizationInduced>(v_) ? "optimization" : "operator";
}

std::optional<Eigen::Index> Bifunction::dim() const {
  if (const auto* o = std::get_if<bifunctions::OperatorInduced>(&v_)) return o->c.size();
  return std::get<bifunctions::OptimizationInduced>(v_).g.dim();
}

Matrix Bifunction::operator_matrix(Eigen::Index n) const {
  if (const auto* o = std::get_if<bifunctions::OperatorInduced>(&v_)) {
    require_dim(o->c.size(), n, "operator bifunction");
    return o->M;
  }
  return std::get<bifunctions::OptimizationInduced>(v_).g.smooth_hessian(n);
}

Vector Bifunction::operator_offset(Eigen::Index n) const {
  if (const auto* o = std::get_if<bifunctions::OperatorInduced>(&v_)) {
    require_dim(o->c.size(), n, "operator bifunction");
    return o->c;
  }
  return std::get<bifunctions::OptimizationInduced>(v_).g.smooth_gradient_offset(n);
}

Vector Bifunction::l1_weights(Eigen::Index n) const {
  if (const auto* o = std::get_if<bifunctions::OptimizationInduced>(&v_)) return o->g.l1_weights(n);
  return Vector::Zero(n);
}

double theta_eval(const Bifunction& theta, const PrimalPoint& x, const PrimalPoint& y) { return theta(x, y); }

// ---------------------------------------------------------------------------
// Blum-Oettli conditions

const ConditionCheck& BlumOettliReport::condition(std::string_view name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw PreconditionError("no condition named " + std::string(name));
}

BlumOettliReport validate_blum_oettli(const Bifunction& theta, const ConvexSet& set, int samples, double tol,
                                      std::uint64_t seed) {
  if (samples < 1) throw SampleError("validate_blum_oettli: need at least one sample");
  const Eigen::Index n = set.dim();
  if (auto d = theta.dim(); d && *d != n) throw DomainError("validate_blum_oettli: bifunction and set dimensions differ");

  Rng rng(seed);
  const auto geom = LegendreFunction::squared_norm(n);
  const PrimalPoint anchor = feasible_point(set, geom, PrimalPoint::zero(n));
  const auto pts = sample_set_points(set, geom, anchor, std::max(samples, 2), rng, 2.0);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);

  ConditionCheck a1, a2, a3, a4, a5;
  a1.name = "A1";
  a2.name = "A2";
  a3.name = "A3";
  a4.name = "A4";
  a5.name = "A5";
  for (const auto& x : pts) a1.worst_violation = std::max(a1.worst_violation, std::abs(theta(x, x)));

  a2.worst_violation = -std::numeric_limits<double>::infinity();
  a4.worst_violation = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const auto& x = pts[pick(rng)];
    const auto& y = pts[pick(rng)];
    a2.worst_violation = std::max(a2.worst_violation, theta(x, y) + theta(y, x));

    const auto& y2 = pts[pick(rng)];
    const PrimalPoint mid(Vector(0.5 * (y.coords() + y2.coords())));
    a4.worst_violation = std::max(a4.worst_violation, theta(x, mid) - 0.5 * (theta(x, y) + theta(x, y2)));
  }
  a2.worst_violation = std::max(a2.worst_violation, 0.0);
  a4.worst_violation = std::max(a4.worst_violation, 0.0);

  a3.checked = a5.checked = false;
  a3.note = a5.note = "holds by construction (continuous in each argument)";

  BlumOettliReport report;
  report.samples = samples;
  for (auto* c : {&a1, &a2, &a3, &a4, &a5}) {
    if (c->checked) c->passed = c->worst_violation <= tol;
    report.passed = report.passed && c->passed;
    report.conditions.push_back(*c);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Resolvent

ResolventSolver::ResolventSolver(LegendreFunction f, Bifunction theta, ConvexFunctional phi, ConvexSet set,
                                 ResolventOptions opts)
    : f_(std::move(f)), theta_(std::move(theta)), phi_(std::move(phi)), set_(std::move(set)), opts_(opts) {
  const Eigen::Index n = f_.dim();
  f_.require_dim(set_.dim(), "resolvent(set)");
  if (auto d = theta_.dim(); d) f_.require_dim(*d, "resolvent(bifunction)");
  if (auto d = phi_.dim(); d) f_.require_dim(*d, "resolvent(phi)");
  if (!theta_.is_monotone()) throw PreconditionError("resolvent: bifunction is not monotone (A2 fails)");

  poly_ = flatten(set_);
  op_ = theta_.operator_matrix(n) + phi_.smooth_hessian(n);
  offset_ = theta_.operator_offset(n) + phi_.smooth_gradient_offset(n);
  l1_ = theta_.l1_weights(n) + phi_.l1_weights(n);
  lipschitz_ = Eigen::JacobiSVD<Matrix>(op_).singularValues()(0);

  const bool euclidean =
      f_.kind() == LegendreKind::SquaredNorm || (f_.kind() == LegendreKind::PowerP && f_.p() == 2.0);
  linear_path_ = euclidean && poly_.rows.empty() && !poly_.has_bounds() && l1_.isZero(0.0) && lipschitz_ > 0.0;
}

ResolventResult ResolventSolver::solve(const PrimalPoint& x, const std::optional<PrimalPoint>& warm_start) const {
  f_.require_domain(x, "mixed_resolvent");
  const Eigen::Index n = f_.dim();
  const Vector gx = grad(f_, x).coords();

  Vector z;
  int iterations = 1;
  if (lipschitz_ == 0.0) {
    // argmin_C  f(y) - <grad f(x) - offset, y> + sum w |y|
    z = solve_separable_prox(SeparableKernel::legendre(f_), gx - offset_, l1_, poly_, 1e-13).point;
  } else if (linear_path_) {
    // (op + I) z = x - offset
    z = (op_ + Matrix::Identity(n, n)).partialPivLu().solve(x.coords() - offset_);
  } else {
    // Tseng: zb = J(z - tau G z),  z+ = zb - tau (G zb - G z), with
    // J = (I + tau (grad f - grad f(x) + d(l1 + i_C)))^{-1}.
    const double tau = 0.9 / lipschitz_;
    const auto kernel = SeparableKernel::shifted(f_, tau);
    const Vector l1 = tau * l1_;
    Vector cur = warm_start ? warm_start->coords() : x.coords();
    f_.require_dim(cur.size(), "mixed_resolvent(warm start)");
    Vector g_cur = op_ * cur + offset_;
    double step = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (iterations = 1; iterations <= opts_.max_iterations; ++iterations) {
      const Vector s = tau * gx + cur - tau * g_cur;
      Vector zb = solve_separable_prox(kernel, s, l1, poly_, 1e-13).point;
      const Vector g_zb = op_ * zb + offset_;
      step = (zb - cur).cwiseAbs().maxCoeff();
      if (step <= 1e-14 * (1.0 + zb.cwiseAbs().maxCoeff())) {
        z = std::move(zb);
        converged = true;
        break;
      }
      cur = zb - tau * (g_zb - g_cur);
      g_cur = op_ * cur + offset_;
    }
    if (!converged) {
      throw ConvergenceError("mixed_resolvent: Tseng iteration hit " + std::to_string(opts_.max_iterations) +
                                 " iterations",
                             step);
    }
  }

  PrimalPoint zp(std::move(z));
  if (!f_.in_domain(zp)) throw DomainError("mixed_resolvent: solution left int(dom f)");
  const double vi = verify_resolvent_vi(f_, theta_, phi_, set_, zp, x, opts_.vi_samples, opts_.seed, opts_.vi_radius);
  if (vi > opts_.tol) throw ConvergenceError("mixed_resolvent: sampled VI residual above tolerance", vi);
  return {std::move(zp), iterations, vi};
}

ResolventResult mixed_resolvent(const LegendreFunction& f, const Bifunction& theta, const ConvexFunctional& phi,
                                const ConvexSet& set, const PrimalPoint& x, double tol,
                                const std::optional<PrimalPoint>& warm_start) {
  ResolventOptions opts;
  opts.tol = tol;
  return ResolventSolver(f, theta, phi, set, opts).solve(x, warm_start);
}

double verify_resolvent_vi(const LegendreFunction& f, const Bifunction& theta, const ConvexFunctional& phi,
                           const ConvexSet& set, const PrimalPoint& z, const PrimalPoint& x, int samples,
                           std::uint64_t seed, double radius) {
  Rng rng(seed);
  const Vector gap = grad(f, z).coords() - grad(f, x).coords();
  const double phi_z = phi.value(z);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : sample_set_points(set, f, z, samples, rng, radius)) {
    worst = std::max(worst, phi_z - theta(z, y) - phi.value(y) - gap.dot(y.coords() - z.coords()));
  }
  return worst;
}

double bfne_check(const LegendreFunction& f, const PointMap& T, const PrimalPoint& x, const PrimalPoint& y) {
  const PrimalPoint tx = T(x);
  const PrimalPoint ty = T(y);
  const double lhs = bregman_distance(f, tx, ty) + bregman_distance(f, ty, tx) + bregman_distance(f, tx, x) +
                     bregman_distance(f, ty, y);
  const double rhs = bregman_distance(f, tx, y) + bregman_distance(f, ty, x);
  return lhs - rhs;
}

}  // namespace bregman
