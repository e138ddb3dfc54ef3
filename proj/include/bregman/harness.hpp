#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bregman/config.hpp"
#include "bregman/suites.hpp"

namespace bregman {

/// Command-line overrides, applied to the JSON document before parsing.
struct Overrides {
  std::optional<std::string> algo;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  /// Output directory; relative output names from the config are placed in it.
  std::optional<std::string> out;
};

nlohmann::json read_json_file(const std::string& path);
nlohmann::json apply_overrides(nlohmann::json doc, const Overrides& ov);
std::string resolve_output(const std::string& name, const Overrides& ov);
/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitIncomplete = 2 };

struct RunOutcome {
  Trace trace;
  nlohmann::json summary;
  int exit_code = kExitError;
};

/// Runs the configured scheme. Writes the CSV trace and the JSON summary
/// unless the output names are empty. Exit 0 on Converged, 2 on MaxIter, 1 on error.
RunOutcome cmd_run(const RunConfig& cfg, const Overrides& ov = {});

struct CheckOutcome {
  std::vector<SuiteReport> reports;
  nlohmann::json report;
  int exit_code = kExitError;
};

/// Runs the selected suites (all four when `suites` and the config list are
/// empty). Exit 0 when every invariant holds, 2 otherwise.
CheckOutcome cmd_check(const RunConfig& cfg, std::vector<std::string> suites, const Overrides& ov = {});

struct SweepRow {
  std::string algo;
  double p = 0.0;
  double s = 0.0;
  double beta = 0.0;
  int max_iter = 0;
  std::string status;
  int iterations = 0;
  double distance_to_witness = 0.0;
  double df_to_witness = 0.0;
  double wall_seconds = 0.0;
  std::string message;
};

inline constexpr const char* kSweepHeader =
    "algo,p,s,beta,max_iter,status,iterations,final_distance_to_witness,final_Df_to_witness,wall_seconds";

/// One cell per point of the grid product; cells run on up to `jobs` threads
/// and rows come back in grid order.
std::vector<SweepRow> cmd_sweep(const nlohmann::json& doc, const SweepGrid& grid, int jobs = 1);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace bregman
