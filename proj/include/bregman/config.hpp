#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bregman/algorithms.hpp"

namespace bregman {

struct OutputPaths {
  std::string trace = "trace.csv";
  std::string summary = "summary.json";
  std::string report = "report.json";
  std::string sweep = "sweep.csv";
};

/// Cells of a sweep are the Cartesian product of the nonempty axes. An axis
/// left empty keeps the base config value; a grid with no axes at all is empty.
struct SweepGrid {
  std::vector<std::string> algo;
  std::vector<double> p;
  std::vector<double> s;
  std::vector<double> beta;
  std::vector<int> max_iter;

  bool empty() const noexcept { return algo.empty() && p.empty() && s.empty() && beta.empty() && max_iter.empty(); }
};

/// A parsed and cross-checked configuration document.
///
/// The problem parts are kept separately so that `check` can still inspect
/// data (e.g. a non-monotone bifunction) for which no instance can be built.
struct RunConfig {
  std::uint64_t seed = 42;
  LegendreFunction geometry = LegendreFunction::squared_norm(1);
  ConvexSet set = ConvexSet::whole_space(1);
  Bifunction theta = Bifunction::optimization(ConvexFunctional::zero());
  ConvexFunctional phi = ConvexFunctional::zero();
  std::vector<BsneMapping> mappings;
  PrimalPoint x1;
  std::optional<PrimalPoint> witness;
  std::optional<PrimalPoint> anchor;
  std::optional<PrimalPoint> target;
  Algorithm algorithm = Algorithm::Main;
  StepSchedule schedule;
  StopCriteria stop;
  OutputPaths output;
  SweepGrid sweep;
  std::vector<std::string> suites;
  /// Set when the data admits an instance (monotone bifunction).
  std::optional<ProblemInstance> instance;
};

/// Parse a JSON document. Every failure is a ConfigError whose field() is the
/// dotted path of the offending entry ("mappings[1].set.a").
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Normalised JSON for `cfg`; parse_config(echo_config(cfg)) rebuilds an
/// equivalent configuration.
nlohmann::json echo_config(const RunConfig& cfg);

nlohmann::json to_json(const ConvexSet& set);
nlohmann::json to_json(const ConvexFunctional& g);
nlohmann::json to_json(const Bifunction& theta);
nlohmann::json to_json(const LegendreFunction& f);
nlohmann::json to_json(const BsneMapping& T);
nlohmann::json to_json(const StepRule& rule);

}  // namespace bregman
