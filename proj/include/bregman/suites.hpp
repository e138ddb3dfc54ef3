#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bregman/algorithms.hpp"

namespace bregman {

/// One checked property. `worst` is the largest violation seen, oriented so
/// that the property holds iff worst <= bound.
struct InvariantResult {
  std::string name;
  double worst = 0.0;
  double bound = 0.0;
  int samples = 0;
  bool passed = true;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<InvariantResult> results;
  double seconds = 0.0;

  bool passed() const;
  const InvariantResult& result(const std::string& name) const;
};

nlohmann::json to_json(const SuiteReport& report);

/// Gradient round trip, V_f against D_f, the subgradient inequality and the
/// dual-average Jensen inequality on `samples` seeded points.
SuiteReport core_identities_suite(const LegendreFunction& f, int samples, std::uint64_t seed = 42);

/// Random (x, set) pairs over halfspaces, hyperplanes, boxes and
/// intersections of two halfspaces; `extra` is checked as well when given.
/// Variational characterisation, three-point inequality, idempotence, and
/// firm nonexpansiveness of the projection.
SuiteReport projection_suite(const LegendreFunction& f, int pairs, std::uint64_t seed = 42,
                             const std::optional<ConvexSet>& extra = std::nullopt);

struct ResolventFamily {
  std::string name;
  Bifunction theta;
  ConvexFunctional phi;
  ConvexSet set;
  /// A known solution of the equilibrium problem (enables the three-point
  /// and fixed-point checks).
  std::optional<PrimalPoint> solution;
};

/// Blum-Oettli conditions, then (monotone families only) VI residual, firm
/// nonexpansiveness, the three-point inequality and the fixed-point / MEP
/// equivalence on `samples` random points per family.
SuiteReport resolvent_suite(const LegendreFunction& f, const std::vector<ResolventFamily>& families, int samples,
                            std::uint64_t seed = 42);

/// q(early) vs q(min(late, end)): true when the later value is at least ten
/// times smaller or already below `floor`. On traces shorter than 10 * early
/// the early index moves to end / 10.
bool vanishing_trend(const std::vector<double>& q, int early = 100, int late = 10000, double floor = 1e-12);

/// The four vanishing quantities along a main-scheme trace, indexed by row.
struct VanishingSeries {
  std::vector<double> coupling;      // |x_{n+1} - T y_n|
  std::vector<double> resolvent_gap; // |x_n - z_n|
  std::vector<double> zy_gap;        // |z_n - y_n|
  std::vector<double> fp_residual;   // |x_n - T x_n|
};

VanishingSeries vanishing_series(const Trace& trace);

/// Runs the main scheme and checks Fejer monotonicity, the stage inequality,
/// the vanishing trends and (with a witness) the final distance.
SuiteReport algorithm_suite(const ProblemInstance& inst, const StepSchedule& sched, const StopCriteria& stop,
                            double distance_tol = 1e-4);

}  // namespace bregman
