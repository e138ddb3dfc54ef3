#include "bregman/algorithms.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "bregman/overloaded.hpp"

namespace bregman {

using detail::overloaded;

double rule_value(const StepRule& rule, int n) {
  return std::visit(overloaded{
                        [n](const rules::PowerDecay& r) {
                          return std::min(r.a / std::pow(static_cast<double>(n) + 1.0, r.s), 0.999);
                        },
                        [](const rules::Constant& r) { return r.v; },
                    },
                    rule);
}

namespace {

void check_rule(const StepRule& rule, std::string_view name) {
  std::visit(overloaded{
                 [&](const rules::PowerDecay& r) {
                   if (!(r.a > 0.0) || !std::isfinite(r.a)) {
                     throw ScheduleError(std::string(name) + ": power decay needs a > 0");
                   }
                   if (!(r.s > 0.0 && r.s <= 1.0)) {
                     throw ScheduleError(std::string(name) + ": power decay needs s in (0, 1]");
                   }
                 },
                 [&](const rules::Constant& r) {
                   if (!(r.v > 0.0 && r.v < 1.0)) throw ScheduleError(std::string(name) + ": constant must lie in (0, 1)");
                 },
             },
             rule);
}

constexpr double kMepTol = 1e-7;

double sup_diff(const PrimalPoint& a, const PrimalPoint& b) { return max_abs_diff(a, b); }

PrimalPoint average(const LegendreFunction& f, double w, const PrimalPoint& a, const PrimalPoint& b) {
  const std::array<double, 2> weights{w, 1.0 - w};
  const std::array<PrimalPoint, 2> points{a, b};
  return dual_average(f, weights, points);
}

double df_witness(const ProblemInstance& inst, const PrimalPoint& x) {
  return inst.witness() ? bregman_distance(inst.geometry(), *inst.witness(), x)
                        : std::numeric_limits<double>::quiet_NaN();
}

void require_step_weight(double w, std::string_view name) {
  if (!(w > 0.0 && w < 1.0)) throw ScheduleError(std::string(name) + " must lie in (0, 1)");
}

enum class Variant { Main, Kumam, Halpern, Zegeye };

IterationState one_step(Variant v, const ProblemInstance& inst, const PrimalPoint& u, const PrimalPoint& x, int n,
                        double alpha, double beta, const std::optional<PrimalPoint>& warm) {
  require_step_weight(alpha, "alpha");
  const LegendreFunction& f = inst.geometry();
  const BsneMapping& T = inst.composite();
  IterationState st;
  st.n = n;
  st.alpha = alpha;
  st.x = x;
  st.tx = apply(T, x);

  if (v == Variant::Main || v == Variant::Kumam) {
    require_step_weight(beta, "beta");
    st.beta = beta;
    const ResolventResult r = inst.resolvent().solve(x, warm);
    st.z = r.point;
    st.resolvent_iters = r.inner_iterations;
    const PrimalPoint tz = apply(T, st.z);
    st.y = average(f, beta, x, tz);
    if (v == Variant::Main) st.y = bregman_project(f, inst.set(), st.y).point;
    st.ty = apply(T, st.y);
    st.x_next = average(f, alpha, x, st.ty);
    if (v == Variant::Main) st.x_next = bregman_project(f, inst.set(), st.x_next).point;
  } else {
    st.beta = std::numeric_limits<double>::quiet_NaN();
    st.z = st.tx;
    st.y = st.tx;
    st.ty = apply(T, st.y);
    st.x_next = average(f, alpha, u, st.tx);
    if (v == Variant::Zegeye) st.x_next = bregman_project(f, inst.set(), st.x_next).point;
  }

  st.df_to_witness = df_witness(inst, x);
  st.df_y_to_witness = df_witness(inst, st.y);
  st.fp_residual = sup_diff(x, st.tx);
  st.step_norm = sup_diff(st.x_next, x);
  st.coupling = sup_diff(st.x_next, st.ty);
  return st;
}

Trace drive(Variant v, Algorithm algo, const ProblemInstance& inst, const PrimalPoint& u,
            const StepSchedule& sched, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Trace trace;
  trace.algorithm = algo;
  PrimalPoint x = inst.x1();
  std::optional<PrimalPoint> warm;
  const bool fejer = v == Variant::Main && inst.witness().has_value();

  try {
    for (int n = 1; n <= opts.stop.max_iter; ++n) {
      IterationState st = one_step(v, inst, u, x, n, sched.alpha(n), sched.beta(n), warm);
      if (opts.post_step) {
        opts.post_step(st);
        st.step_norm = sup_diff(st.x_next, st.x);
        st.coupling = sup_diff(st.x_next, st.ty);
      }
      if (fejer) {
        const double next = df_witness(inst, st.x_next);
        if (next > st.df_to_witness + opts.monotone_slack) {
          trace.rows.push_back(st);
          throw MonotonicityViolation("D_f(p, x_" + std::to_string(n + 1) + ") = " + std::to_string(next) +
                                      " exceeds D_f(p, x_" + std::to_string(n) +
                                      ") = " + std::to_string(st.df_to_witness));
        }
      }
      if (v == Variant::Kumam && !contains(inst.set(), st.x_next, 1e-9)) {
        trace.warnings.push_back("DomainExitWarning: x_" + std::to_string(n + 1) + " left C");
      }
      const bool done = st.step_norm <= opts.stop.x_tol && st.fp_residual <= opts.stop.fp_tol;
      x = st.x_next;
      warm = st.z;
      trace.rows.push_back(std::move(st));
      if (done) {
        trace.status = RunStatus::Converged;
        break;
      }
    }
    trace.final_x = x;
  } catch (const Error& e) {
    trace.status = RunStatus::Error;
    trace.error_kind = e.kind();
    trace.error_message = e.what();
    trace.final_x = x;
  }

  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace

StepSchedule StepSchedule::make(StepRule alpha, StepRule beta) {
  if (std::holds_alternative<rules::Constant>(alpha)) {
    throw ScheduleError("alpha: a constant step does not vanish; use a power decay");
  }
  check_rule(alpha, "alpha");
  check_rule(beta, "beta");
  return StepSchedule(alpha, beta);
}

ProblemInstance::ProblemInstance(InstanceSpec spec) : spec_(std::move(spec)) {}

ProblemInstance ProblemInstance::make(InstanceSpec spec) {
  const LegendreFunction& f = spec.geometry;
  const Eigen::Index n = f.dim();
  f.require_dim(spec.set.dim(), "instance set");
  f.require_domain(spec.x1, "instance x1");
  if (!contains(spec.set, spec.x1, 1e-9)) throw PreconditionError("instance: x1 must lie in C");
  if (spec.mappings.empty()) throw PreconditionError("instance: at least one mapping is required");
  for (const auto& m : spec.mappings) {
    if (!(m.geometry() == f)) throw PreconditionError("instance: mapping geometry differs from the instance geometry");
  }
  if (const auto d = spec.theta.dim(); d && *d != n) throw PreconditionError("instance: bifunction dimension mismatch");
  if (const auto d = spec.phi.dim(); d && *d != n) throw PreconditionError("instance: phi dimension mismatch");
  if (spec.anchor) f.require_domain(*spec.anchor, "instance anchor");
  if (spec.target) f.require_dim(spec.target->dim(), "instance target");

  ProblemInstance inst(std::move(spec));
  inst.resolvent_ = std::make_shared<const ResolventSolver>(inst.spec_.geometry, inst.spec_.theta, inst.spec_.phi,
                                                            inst.spec_.set, inst.spec_.resolvent);
  std::optional<PrimalPoint> common = inst.spec_.witness;
  inst.composite_ = std::make_shared<const BsneMapping>(BsneMapping::composition(inst.spec_.mappings, common));

  if (const auto& p = inst.spec_.witness) {
    f.require_domain(*p, "instance witness");
    if (!contains(inst.spec_.set, *p, 1e-9)) throw PreconditionError("instance: witness must lie in C");
    for (const auto& m : inst.spec_.mappings) {
      if (!(fixed_point_residual(f, m, *p).sup_norm <= kWitnessTol)) {
        throw PreconditionError("instance: witness is not fixed by every mapping");
      }
    }
    const double vi = verify_resolvent_vi(f, inst.spec_.theta, inst.spec_.phi, inst.spec_.set, *p, *p,
                                          inst.spec_.resolvent.vi_samples, inst.spec_.resolvent.seed);
    if (!(vi <= kMepTol)) throw PreconditionError("instance: witness does not solve the equilibrium problem");
  }
  return inst;
}

ProblemInstance ProblemInstance::with_start(const PrimalPoint& x1) const {
  InstanceSpec s = spec_;
  s.x1 = x1;
  return make(std::move(s));
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::Error: return "Error";
  }
  return "?";
}

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::Main: return "main";
    case Algorithm::Halpern: return "halpern";
    case Algorithm::Zegeye: return "zegeye";
    case Algorithm::Kumam: return "kumam";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::Main, Algorithm::Halpern, Algorithm::Zegeye, Algorithm::Kumam}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("algorithm", "unknown algorithm '" + std::string(name) + "'");
}

IterationState step_main(const ProblemInstance& inst, const PrimalPoint& x, int n, double alpha, double beta,
                         const std::optional<PrimalPoint>& warm_start) {
  return one_step(Variant::Main, inst, x, x, n, alpha, beta, warm_start);
}

Trace run_main(const ProblemInstance& inst, const StepSchedule& sched, const RunOptions& opts) {
  return drive(Variant::Main, Algorithm::Main, inst, inst.x1(), sched, opts);
}

Trace run_corollary(const ProblemInstance& inst, const rules::PowerDecay& alpha, double beta,
                    const RunOptions& opts) {
  if (inst.mappings().size() != 1) throw PreconditionError("run_corollary: exactly one mapping is required");
  return run_main(inst, StepSchedule::make(alpha, rules::Constant{beta}), opts);
}

Trace run_halpern(const ProblemInstance& inst, const PrimalPoint& u, const StepSchedule& sched,
                  const RunOptions& opts) {
  inst.geometry().require_domain(u, "run_halpern anchor");
  return drive(Variant::Halpern, Algorithm::Halpern, inst, u, sched, opts);
}

Trace run_zegeye(const ProblemInstance& inst, const PrimalPoint& u, const StepSchedule& sched,
                 const RunOptions& opts) {
  inst.geometry().require_domain(u, "run_zegeye anchor");
  return drive(Variant::Zegeye, Algorithm::Zegeye, inst, u, sched, opts);
}

Trace run_kumam(const ProblemInstance& inst, const StepSchedule& sched, const RunOptions& opts) {
  const auto& v = inst.set().variant();
  if (!std::holds_alternative<sets::WholeSpace>(v) && !std::holds_alternative<sets::Box>(v)) {
    throw PreconditionError("run_kumam: C must be the whole space or a box");
  }
  return drive(Variant::Kumam, Algorithm::Kumam, inst, inst.x1(), sched, opts);
}

Trace run_algorithm(Algorithm algo, const ProblemInstance& inst, const StepSchedule& sched, const RunOptions& opts) {
  switch (algo) {
    case Algorithm::Main: return run_main(inst, sched, opts);
    case Algorithm::Halpern: return run_halpern(inst, inst.anchor(), sched, opts);
    case Algorithm::Zegeye: return run_zegeye(inst, inst.anchor(), sched, opts);
    case Algorithm::Kumam: return run_kumam(inst, sched, opts);
  }
  throw PreconditionError("run_algorithm: unknown algorithm");
}

double verify_limit_is_projection(const ProblemInstance& inst, const PrimalPoint& xhat,
                                  const std::vector<PrimalPoint>& omega) {
  const LegendreFunction& f = inst.geometry();
  f.require_domain(xhat, "verify_limit_is_projection");
  const Vector gap = grad(f, inst.x1()).coords() - grad(f, xhat).coords();
  double worst = omega.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const auto& w : omega) {
    if (!(fixed_point_residual(f, inst.composite(), w).sup_norm <= kWitnessTol)) {
      throw PreconditionError("verify_limit_is_projection: sample is not a fixed point of T");
    }
    const double vi = verify_resolvent_vi(f, inst.theta(), inst.phi(), inst.set(), w, w,
                                          inst.spec().resolvent.vi_samples, inst.spec().resolvent.seed);
    if (!(vi <= kMepTol)) throw PreconditionError("verify_limit_is_projection: sample does not solve the MEP");
    worst = std::max(worst, gap.dot(w.coords() - xhat.coords()));
  }
  return worst;
}

}  // namespace bregman
