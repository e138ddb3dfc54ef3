#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bregman/operators.hpp"

namespace bregman {

namespace rules {

/// a_n = min(a / (n + 1)^s, 0.999) with a > 0 and s in (0, 1].
struct PowerDecay {
  double a = 1.0;
  double s = 1.0;
};

/// v in (0, 1); only allowed for beta.
struct Constant {
  double v = 0.5;
};

}  // namespace rules

using StepRule = std::variant<rules::PowerDecay, rules::Constant>;

double rule_value(const StepRule& rule, int n);

/// Step sizes (alpha_n, beta_n). alpha must decay with a divergent sum, so
/// only PowerDecay is accepted for it.
class StepSchedule {
 public:
  /// Default schedule: alpha_n = 1/(n+1), beta_n = 1/2.
  StepSchedule() : StepSchedule(make(rules::PowerDecay{1.0, 1.0}, rules::Constant{0.5})) {}
  static StepSchedule make(StepRule alpha, StepRule beta);

  double alpha(int n) const { return rule_value(alpha_, n); }
  double beta(int n) const { return rule_value(beta_, n); }
  const StepRule& alpha_rule() const noexcept { return alpha_; }
  const StepRule& beta_rule() const noexcept { return beta_; }

 private:
  StepSchedule(StepRule alpha, StepRule beta) : alpha_(alpha), beta_(beta) {}
  StepRule alpha_;
  StepRule beta_;
};

struct InstanceSpec {
  LegendreFunction geometry;
  ConvexSet set;
  Bifunction theta;
  ConvexFunctional phi;
  std::vector<BsneMapping> mappings;
  PrimalPoint x1;
  std::optional<PrimalPoint> witness;
  std::optional<PrimalPoint> target;  // exact proj of x1 onto the solution set, when known
  std::optional<PrimalPoint> anchor;  // u for the anchored schemes (defaults to x1)
  ResolventOptions resolvent{};
};

/// Validated problem data for the iterative schemes. Immutable and shareable.
class ProblemInstance {
 public:
  /// Checks x1 in C and in dom f, shared geometry and dimension, and (when a
  /// witness is given) that it is fixed by every mapping and solves the MEP.
  static ProblemInstance make(InstanceSpec spec);

  const LegendreFunction& geometry() const noexcept { return spec_.geometry; }
  const ConvexSet& set() const noexcept { return spec_.set; }
  const Bifunction& theta() const noexcept { return spec_.theta; }
  const ConvexFunctional& phi() const noexcept { return spec_.phi; }
  const std::vector<BsneMapping>& mappings() const noexcept { return spec_.mappings; }
  const PrimalPoint& x1() const noexcept { return spec_.x1; }
  const std::optional<PrimalPoint>& witness() const noexcept { return spec_.witness; }
  const std::optional<PrimalPoint>& target() const noexcept { return spec_.target; }
  const PrimalPoint& anchor() const noexcept { return spec_.anchor ? *spec_.anchor : spec_.x1; }
  const InstanceSpec& spec() const noexcept { return spec_; }

  /// T = T_N o ... o T_1 (T_1 applied first).
  const BsneMapping& composite() const noexcept { return *composite_; }
  const ResolventSolver& resolvent() const noexcept { return *resolvent_; }

  /// Same data with a different starting point.
  ProblemInstance with_start(const PrimalPoint& x1) const;

 private:
  explicit ProblemInstance(InstanceSpec spec);

  InstanceSpec spec_;
  std::shared_ptr<const BsneMapping> composite_;
  std::shared_ptr<const ResolventSolver> resolvent_;
};

/// One row of a trace. For the anchored schemes z and y both hold T(x_n).
struct IterationState {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  PrimalPoint x;
  PrimalPoint z;
  PrimalPoint y;
  PrimalPoint x_next;
  PrimalPoint tx;  // T(x_n)
  PrimalPoint ty;  // T(y_n)
  double df_to_witness = 0.0;  // D_f(p, x_n), NaN without a witness
  double df_y_to_witness = 0.0;  // D_f(p, y_n)
  double fp_residual = 0.0;  // |x_n - T x_n|_inf
  double step_norm = 0.0;  // |x_{n+1} - x_n|_inf
  double coupling = 0.0;  // |x_{n+1} - T y_n|_inf
  int resolvent_iters = 0;
};

enum class RunStatus { Converged, MaxIter, Error };

std::string_view to_string(RunStatus status);

enum class Algorithm { Main, Halpern, Zegeye, Kumam };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

struct Trace {
  Algorithm algorithm = Algorithm::Main;
  std::vector<IterationState> rows;
  RunStatus status = RunStatus::MaxIter;
  std::optional<ErrorKind> error_kind;
  std::string error_message;
  std::vector<std::string> warnings;
  std::optional<PrimalPoint> final_x;
  double wall_seconds = 0.0;

  int iterations() const noexcept { return static_cast<int>(rows.size()); }
};

struct StopCriteria {
  int max_iter = 20000;
  double x_tol = 1e-12;
  double fp_tol = 1e-12;
};

struct RunOptions {
  StopCriteria stop{};
  /// Slack allowed in the Fejer check D_f(p, x_{n+1}) <= D_f(p, x_n) + slack.
  double monotone_slack = 1e-10;
  /// Called on every row before it is checked and recorded; tests use it to corrupt a step.
  std::function<void(IterationState&)> post_step;
};

/// z = Res(x_n); y = P_C grad f*(b grad f(x_n) + (1-b) grad f(T z));
/// x_{n+1} = P_C grad f*(a grad f(x_n) + (1-a) grad f(T y)).
IterationState step_main(const ProblemInstance& inst, const PrimalPoint& x, int n, double alpha, double beta,
                         const std::optional<PrimalPoint>& warm_start = std::nullopt);

Trace run_main(const ProblemInstance& inst, const StepSchedule& sched, const RunOptions& opts = {});

/// Single mapping, constant beta: the reduced form of the main scheme.
Trace run_corollary(const ProblemInstance& inst, const rules::PowerDecay& alpha, double beta,
                    const RunOptions& opts = {});

/// x_{n+1} = grad f*(a_n grad f(u) + (1 - a_n) grad f(T x_n)).
Trace run_halpern(const ProblemInstance& inst, const PrimalPoint& u, const StepSchedule& sched,
                  const RunOptions& opts = {});

/// As run_halpern with a projection onto C after each step.
Trace run_zegeye(const ProblemInstance& inst, const PrimalPoint& u, const StepSchedule& sched,
                 const RunOptions& opts = {});

/// The main scheme without the two projections onto C (C must be the whole
/// space or a box). Iterates that leave C are reported as warnings.
Trace run_kumam(const ProblemInstance& inst, const StepSchedule& sched, const RunOptions& opts = {});

Trace run_algorithm(Algorithm algo, const ProblemInstance& inst, const StepSchedule& sched,
                    const RunOptions& opts = {});

/// max over w in omega of <grad f(x1) - grad f(xhat), w - xhat>. Each sample
/// must be fixed by T and solve the MEP.
double verify_limit_is_projection(const ProblemInstance& inst, const PrimalPoint& xhat,
                                  const std::vector<PrimalPoint>& omega);

}  // namespace bregman
