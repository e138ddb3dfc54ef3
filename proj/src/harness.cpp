#include "bregman/harness.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "bregman/trace_io.hpp"

namespace bregman {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// The sampled resolvent families available from a config.
std::vector<ResolventFamily> config_families(const RunConfig& cfg) {
  std::vector<ResolventFamily> fams;
  fams.push_back({"instance", cfg.theta, cfg.phi, cfg.set, cfg.witness});
  return fams;
}

template <class Rule>
const Rule* rule_as(const StepRule& r) {
  return std::get_if<Rule>(&r);
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text)) throw ConfigError("output", "cannot write '" + path + "'");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

json apply_overrides(json doc, const Overrides& ov) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  if (ov.algo) doc["algorithm"] = *ov.algo;
  if (ov.seed) doc["seed"] = *ov.seed;
  if (ov.max_iter) {
    if (!doc.contains("stop") || !doc["stop"].is_object()) doc["stop"] = json::object();
    doc["stop"]["max_iter"] = *ov.max_iter;
  }
  return doc;
}

std::string resolve_output(const std::string& name, const Overrides& ov) {
  if (name.empty() || !ov.out) return name;
  const std::filesystem::path p(name);
  if (p.is_absolute()) return name;
  return (std::filesystem::path(*ov.out) / p).string();
}

RunOutcome cmd_run(const RunConfig& cfg, const Overrides& ov) {
  RunOutcome out;
  if (!cfg.instance) throw PreconditionError("run: the bifunction is not monotone, so no instance can be built");
  RunOptions opts;
  opts.stop = cfg.stop;
  out.trace = run_algorithm(cfg.algorithm, *cfg.instance, cfg.schedule, opts);
  out.summary = trace_summary(out.trace, *cfg.instance);
  out.summary["seed"] = cfg.seed;

  if (!cfg.output.trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, out.trace);
    write_text(resolve_output(cfg.output.trace, ov), csv.str());
  }
  if (!cfg.output.summary.empty()) write_text(resolve_output(cfg.output.summary, ov), out.summary.dump(2) + "\n");

  switch (out.trace.status) {
    case RunStatus::Converged: out.exit_code = kExitOk; break;
    case RunStatus::MaxIter: out.exit_code = kExitIncomplete; break;
    case RunStatus::Error: out.exit_code = kExitError; break;
  }
  return out;
}

CheckOutcome cmd_check(const RunConfig& cfg, std::vector<std::string> suites, const Overrides& ov) {
  if (suites.empty()) suites = cfg.suites;
  if (suites.empty()) suites = {"core-identities", "projection", "resolvent", "algorithm"};

  CheckOutcome out;
  for (const auto& name : suites) {
    if (name == "core-identities") {
      out.reports.push_back(core_identities_suite(cfg.geometry, 1000, cfg.seed));
    } else if (name == "projection") {
      std::optional<ConvexSet> extra;
      if (!cfg.set.is_whole_space()) extra = cfg.set;
      out.reports.push_back(projection_suite(cfg.geometry, 200, cfg.seed, extra));
    } else if (name == "resolvent") {
      out.reports.push_back(resolvent_suite(cfg.geometry, config_families(cfg), 100, cfg.seed));
    } else if (name == "algorithm") {
      if (cfg.instance) {
        out.reports.push_back(algorithm_suite(*cfg.instance, cfg.schedule, cfg.stop));
      } else {
        SuiteReport r{"algorithm", {}, 0.0};
        InvariantResult res;
        res.name = "instance";
        res.worst = 1.0;
        res.passed = false;
        res.note = "no instance: the bifunction is not monotone";
        r.results.push_back(res);
        out.reports.push_back(std::move(r));
      }
    } else {
      throw ConfigError("suite", "unknown suite '" + name + "'");
    }
  }

  bool ok = true;
  out.report = {{"seed", cfg.seed}, {"suites", json::array()}};
  for (const auto& r : out.reports) {
    out.report["suites"].push_back(to_json(r));
    ok = ok && r.passed();
  }
  out.report["passed"] = ok;
  if (!cfg.output.report.empty()) write_text(resolve_output(cfg.output.report, ov), out.report.dump(2) + "\n");
  out.exit_code = ok ? kExitOk : kExitIncomplete;
  return out;
}

std::vector<SweepRow> cmd_sweep(const json& doc, const SweepGrid& grid, int jobs) {
  if (grid.empty()) return {};

  struct Cell {
    std::optional<std::string> algo;
    std::optional<double> p, s, beta;
    std::optional<int> max_iter;
  };
  std::vector<Cell> cells{Cell{}};
  auto expand = [&cells](const auto& axis, auto assign) {
    if (axis.empty()) return;
    std::vector<Cell> next;
    for (const auto& c : cells) {
      for (const auto& v : axis) {
        Cell d = c;
        assign(d, v);
        next.push_back(d);
      }
    }
    cells = std::move(next);
  };
  expand(grid.algo, [](Cell& c, const std::string& v) { c.algo = v; });
  expand(grid.p, [](Cell& c, double v) { c.p = v; });
  expand(grid.s, [](Cell& c, double v) { c.s = v; });
  expand(grid.beta, [](Cell& c, double v) { c.beta = v; });
  expand(grid.max_iter, [](Cell& c, int v) { c.max_iter = v; });

  std::vector<SweepRow> rows(cells.size());
  auto run_cell = [&](std::size_t i) {
    const Cell& c = cells[i];
    SweepRow& row = rows[i];
    row.p = row.s = row.beta = row.distance_to_witness = row.df_to_witness = kNaN;
    try {
      json d = doc;
      d.erase("sweep");
      d["output"] = {{"trace", ""}, {"summary", ""}, {"report", ""}, {"sweep", ""}};
      if (c.algo) d["algorithm"] = *c.algo;
      if (c.p) d["geometry"] = {{"kind", "power_p"}, {"p", *c.p}};
      if (c.s || c.beta) {
        if (!d.contains("schedule")) d["schedule"] = json::object();
        if (c.s) {
          double a = 1.0;
          if (d["schedule"].contains("alpha") && d["schedule"]["alpha"].contains("a")) a = d["schedule"]["alpha"]["a"];
          d["schedule"]["alpha"] = {{"rule", "power"}, {"a", a}, {"s", *c.s}};
        }
        if (c.beta) d["schedule"]["beta"] = {{"rule", "constant"}, {"v", *c.beta}};
      }
      if (c.max_iter) {
        if (!d.contains("stop")) d["stop"] = json::object();
        d["stop"]["max_iter"] = *c.max_iter;
      }

      const RunConfig cfg = parse_config(d);
      row.algo = std::string(to_string(cfg.algorithm));
      row.p = cfg.geometry.kind() == LegendreKind::NegEntropy ? kNaN : cfg.geometry.p();
      if (const auto* a = rule_as<rules::PowerDecay>(cfg.schedule.alpha_rule())) row.s = a->s;
      if (const auto* b = rule_as<rules::Constant>(cfg.schedule.beta_rule())) row.beta = b->v;
      row.max_iter = cfg.stop.max_iter;

      const RunOutcome r = cmd_run(cfg);
      row.status = std::string(to_string(r.trace.status));
      row.iterations = r.trace.iterations();
      row.wall_seconds = r.trace.wall_seconds;
      row.message = r.trace.error_message;
      if (r.summary.contains("final_distance_to_witness")) {
        row.distance_to_witness = r.summary["final_distance_to_witness"];
        row.df_to_witness = r.summary["final_Df_to_witness"];
      }
    } catch (const Error& e) {
      if (row.algo.empty()) row.algo = c.algo.value_or("");
      row.status = "Error";
      row.message = e.what();
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) {
    out += r.algo + "," + format_number(r.p) + "," + format_number(r.s) + "," + format_number(r.beta) + "," +
           std::to_string(r.max_iter) + "," + r.status + "," + std::to_string(r.iterations) + "," +
           format_number(r.distance_to_witness) + "," + format_number(r.df_to_witness) + "," +
           format_number(r.wall_seconds) + "\n";
  }
  return out;
}

}  // namespace bregman
