#include "bregman/suites.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

#include "bregman/random.hpp"
#include "bregman/sampling.hpp"

namespace bregman {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Accumulates the worst violation of one property.
struct Tracker {
  InvariantResult r;

  Tracker(std::string name, double bound) {
    r.name = std::move(name);
    r.bound = bound;
    r.worst = -std::numeric_limits<double>::infinity();
  }
  void add(double violation) {
    r.worst = std::max(r.worst, std::isnan(violation) ? std::numeric_limits<double>::infinity() : violation);
    ++r.samples;
  }
  InvariantResult finish() {
    if (r.samples == 0) {
      r.worst = 0.0;
      if (r.note.empty()) r.note = "no samples";
    }
    r.passed = r.worst <= r.bound;
    return r;
  }
};

/// A random point of int dom f, spread around `center`.
Vector random_point(const LegendreFunction& f, const Vector& center, double scale, Rng& rng) {
  const Vector g = gaussian_vector(rng, center.size());
  if (f.positive_domain()) return center.cwiseProduct((scale * 0.5 * g).array().exp().matrix());
  return center + scale * g;
}

Vector random_center(const LegendreFunction& f, Rng& rng) {
  const Eigen::Index n = f.dim();
  if (f.positive_domain()) return (0.5 * gaussian_vector(rng, n)).array().exp().matrix();
  return gaussian_vector(rng, n);
}

ConvexSet random_set(const LegendreFunction& f, int kind, const Vector& c, Rng& rng) {
  const Eigen::Index n = c.size();
  switch (kind % 4) {
    case 0: {
      const Vector a = unit_direction(rng, n);
      return ConvexSet::halfspace(a, a.dot(c) + uniform(rng, 0.0, 0.5));
    }
    case 1: {
      const Vector a = unit_direction(rng, n);
      return ConvexSet::hyperplane(a, a.dot(c));
    }
    case 2: {
      Vector lo = c - uniform_vector(rng, n, 0.05, 1.0);
      const Vector hi = c + uniform_vector(rng, n, 0.05, 1.0);
      if (f.positive_domain()) lo = lo.cwiseMax(0.0);
      return ConvexSet::box(lo, hi);
    }
    default: {
      const Vector a1 = unit_direction(rng, n);
      const Vector a2 = unit_direction(rng, n);
      return ConvexSet::intersection({ConvexSet::halfspace(a1, a1.dot(c) + uniform(rng, 0.0, 0.3)),
                                      ConvexSet::halfspace(a2, a2.dot(c) + uniform(rng, 0.0, 0.3))},
                                     c);
    }
  }
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const InvariantResult& r) { return r.passed; });
}

const InvariantResult& SuiteReport::result(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw PreconditionError("suite " + suite + " has no result named " + name);
}

nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  j["seconds"] = report.seconds;
  j["results"] = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json e{{"name", r.name}, {"passed", r.passed}, {"worst", r.worst}, {"bound", r.bound},
                     {"samples", r.samples}};
    if (!std::isfinite(r.worst)) e["worst"] = r.worst > 0 ? "inf" : "-inf";
    if (!r.note.empty()) e["note"] = r.note;
    j["results"].push_back(std::move(e));
  }
  return j;
}

SuiteReport core_identities_suite(const LegendreFunction& f, int samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  Rng rng(seed);
  const Eigen::Index n = f.dim();
  const Vector origin = f.positive_domain() ? Vector::Ones(n) : Vector::Zero(n);

  Tracker round_trip("round_trip", 1e-9);
  Tracker v_vs_d("v_equals_d", 1e-10);
  Tracker subgrad("subgradient_inequality", 1e-10);
  Tracker jensen("dual_average_jensen", 1e-10);

  for (int k = 0; k < samples; ++k) {
    const PrimalPoint x(random_point(f, origin, 1.5, rng));
    const PrimalPoint y(random_point(f, origin, 1.5, rng));
    const DualPoint gx = grad(f, x);
    round_trip.add(max_abs_diff(grad_conj(f, gx), x));

    const DualPoint gy = grad(f, y);
    v_vs_d.add(std::abs(v_fun(f, x, gy) - bregman_distance(f, x, y)));

    // V(x, x*) + <y*, grad f*(x*) - x> <= V(x, x* + y*)
    const DualPoint ystar(gaussian_vector(rng, n));
    const DualPoint shifted(Vector(gy.coords() + ystar.coords()));
    subgrad.add(v_fun(f, x, gy) + ystar.coords().dot(grad_conj(f, gy).coords() - x.coords()) -
                v_fun(f, x, shifted));

    const std::array<PrimalPoint, 3> pts{x, y, PrimalPoint(random_point(f, origin, 1.5, rng))};
    std::array<double, 3> w{uniform(rng, 0.05, 1.0), uniform(rng, 0.05, 1.0), uniform(rng, 0.05, 1.0)};
    const double total = w[0] + w[1] + w[2];
    for (double& t : w) t /= total;
    w[2] = 1.0 - w[0] - w[1];
    const PrimalPoint p(random_point(f, origin, 1.5, rng));
    const PrimalPoint avg = dual_average(f, w, pts);
    double rhs = 0.0;
    for (std::size_t i = 0; i < 3; ++i) rhs += w[i] * bregman_distance(f, p, pts[i]);
    jensen.add(bregman_distance(f, p, avg) - rhs);
  }

  SuiteReport report{"core-identities", {}, 0.0};
  for (auto* t : {&round_trip, &v_vs_d, &subgrad, &jensen}) report.results.push_back(t->finish());
  report.seconds = seconds_since(t0);
  return report;
}

SuiteReport projection_suite(const LegendreFunction& f, int pairs, std::uint64_t seed,
                             const std::optional<ConvexSet>& extra) {
  const auto t0 = Clock::now();
  Rng rng(seed);

  Tracker feasible("feasibility", 0.0);
  Tracker variational("variational_characterisation", 1e-8);
  Tracker three_point("three_point_inequality", 1e-10);
  Tracker idempotent("idempotence", 1e-9);
  Tracker firm("firm_nonexpansiveness", 1e-10);

  auto check = [&](const ConvexSet& set, const Vector& c) {
    const PrimalPoint x1(random_point(f, c, 2.0, rng));
    const PrimalPoint x2(random_point(f, c, 2.0, rng));
    const PrimalPoint z1 = bregman_project(f, set, x1).point;
    const PrimalPoint z2 = bregman_project(f, set, x2).point;

    feasible.add(contains(set, z1, 1e-9) ? 0.0 : 1.0);
    variational.add(verify_projection_optimality(f, set, z1, x1, 32, rng()));
    idempotent.add(max_abs_diff(bregman_project(f, set, z1).point, z1));

    const double d_zx = bregman_distance(f, z1, x1);
    for (const auto& y : sample_set_points(set, f, z1, 16, rng)) {
      three_point.add(bregman_distance(f, y, z1) + d_zx - bregman_distance(f, y, x1));
    }

    const Vector g1 = grad(f, z1).coords() - grad(f, z2).coords();
    const Vector gx = grad(f, x1).coords() - grad(f, x2).coords();
    const Vector dz = z1.coords() - z2.coords();
    firm.add(g1.dot(dz) - gx.dot(dz));
  };

  for (int k = 0; k < pairs; ++k) {
    const Vector c = random_center(f, rng);
    check(random_set(f, k, c, rng), c);
  }
  if (extra) {
    const Vector hint = f.positive_domain() ? Vector::Ones(f.dim()) : Vector::Zero(f.dim());
    const Vector c = feasible_point(*extra, f, PrimalPoint(hint)).coords();
    for (int k = 0; k < std::max(pairs / 4, 1); ++k) check(*extra, c);
  }

  SuiteReport report{"projection", {}, 0.0};
  for (auto* t : {&feasible, &variational, &three_point, &idempotent, &firm}) report.results.push_back(t->finish());
  report.seconds = seconds_since(t0);
  return report;
}

SuiteReport resolvent_suite(const LegendreFunction& f, const std::vector<ResolventFamily>& families, int samples,
                            std::uint64_t seed) {
  const auto t0 = Clock::now();
  SuiteReport report{"resolvent", {}, 0.0};
  Rng rng(seed);

  for (const auto& fam : families) {
    const std::string pre = fam.name.empty() ? "" : fam.name + ":";
    const BlumOettliReport bo = validate_blum_oettli(fam.theta, fam.set, std::max(samples, 16), 1e-10, seed);
    for (const auto& c : bo.conditions) {
      InvariantResult r;
      r.name = pre + c.name;
      r.worst = c.checked ? c.worst_violation : 0.0;
      r.bound = 1e-10;
      r.samples = c.checked ? bo.samples : 0;
      r.passed = c.passed;
      r.note = c.note;
      report.results.push_back(std::move(r));
    }
    if (!fam.theta.is_monotone()) continue;

    ResolventOptions opts;
    opts.seed = seed;
    const ResolventSolver solver(f, fam.theta, fam.phi, fam.set, opts);
    const PointMap res = [&](const PrimalPoint& x) { return solver.solve(x).point; };
    const Vector hint = f.positive_domain() ? Vector::Ones(f.dim()) : Vector::Zero(f.dim());
    const Vector center = fam.solution ? fam.solution->coords() : feasible_point(fam.set, f, PrimalPoint(hint)).coords();

    Tracker vi(pre + "vi_residual", 1e-7);
    Tracker firm(pre + "bfne", 1e-8);
    Tracker three(pre + "three_point", 1e-8);
    Tracker fixed(pre + "fixed_point_mep", 1e-7);

    for (int k = 0; k < samples; ++k) {
      const PrimalPoint x(random_point(f, center, 2.0, rng));
      const PrimalPoint y(random_point(f, center, 2.0, rng));
      const PrimalPoint z = res(x);
      vi.add(verify_resolvent_vi(f, fam.theta, fam.phi, fam.set, z, x, 64, rng()));
      firm.add(bfne_check(f, res, x, y));
      if (fam.solution) {
        const PrimalPoint& q = *fam.solution;
        three.add(bregman_distance(f, q, z) + bregman_distance(f, z, x) - bregman_distance(f, q, x));
      }
    }
    if (fam.solution) {
      const PrimalPoint& q = *fam.solution;
      fixed.add(max_abs_diff(res(q), q));
      fixed.add(verify_resolvent_vi(f, fam.theta, fam.phi, fam.set, q, q, 64, seed));
    } else {
      three.r.note = fixed.r.note = "no known solution";
    }
    for (auto* t : {&vi, &firm, &three, &fixed}) report.results.push_back(t->finish());
  }
  report.seconds = seconds_since(t0);
  return report;
}

bool vanishing_trend(const std::vector<double>& q, int early, int late, double floor) {
  if (q.empty()) return true;
  const auto size = static_cast<int>(q.size());
  const double qe = q[static_cast<std::size_t>(std::min(early, std::max(1, size / 10)) - 1)];
  const double ql = q[static_cast<std::size_t>(std::min(late, size) - 1)];
  return ql <= std::max(qe / 10.0, floor);
}

VanishingSeries vanishing_series(const Trace& trace) {
  VanishingSeries s;
  for (const auto& r : trace.rows) {
    s.coupling.push_back(r.coupling);
    s.resolvent_gap.push_back(max_abs_diff(r.x, r.z));
    s.zy_gap.push_back(max_abs_diff(r.z, r.y));
    s.fp_residual.push_back(r.fp_residual);
  }
  return s;
}

SuiteReport algorithm_suite(const ProblemInstance& inst, const StepSchedule& sched, const StopCriteria& stop,
                            double distance_tol) {
  const auto t0 = Clock::now();
  RunOptions opts;
  opts.stop = stop;
  const Trace trace = run_main(inst, sched, opts);

  SuiteReport report{"algorithm", {}, 0.0};
  Tracker status("run_status", 0.0);
  status.add(trace.status == RunStatus::Error ? 1.0 : 0.0);
  if (trace.status == RunStatus::Error) status.r.note = trace.error_message;
  report.results.push_back(status.finish());

  Tracker fejer("fejer_monotonicity", 1e-10);
  Tracker stage("stage_inequality", 1e-10);
  Tracker dist("final_distance_to_witness", distance_tol);
  if (const auto& p = inst.witness()) {
    for (const auto& r : trace.rows) {
      fejer.add(bregman_distance(inst.geometry(), *p, r.x_next) - r.df_to_witness);
      stage.add(r.df_y_to_witness - r.df_to_witness);
    }
    if (trace.final_x) dist.add(max_abs_diff(*trace.final_x, *p));
  } else {
    fejer.r.note = stage.r.note = dist.r.note = "instance has no witness";
  }
  for (auto* t : {&fejer, &stage, &dist}) report.results.push_back(t->finish());

  const VanishingSeries s = vanishing_series(trace);
  const std::array<std::pair<const char*, const std::vector<double>*>, 4> series{{
      {"vanishing_coupling", &s.coupling},
      {"vanishing_resolvent_gap", &s.resolvent_gap},
      {"vanishing_zy_gap", &s.zy_gap},
      {"vanishing_fp_residual", &s.fp_residual},
  }};
  for (const auto& [name, q] : series) {
    InvariantResult r;
    r.name = name;
    r.bound = 0.0;
    r.samples = static_cast<int>(q->size());
    r.passed = vanishing_trend(*q);
    r.worst = r.passed ? 0.0 : 1.0;
    r.note = "q(100) vs q(10000); short traces compare q(end/10) with q(end)";
    report.results.push_back(std::move(r));
  }
  report.seconds = seconds_since(t0);
  return report;
}

}  // namespace bregman
