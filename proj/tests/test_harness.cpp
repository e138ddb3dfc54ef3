#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "bregman/harness.hpp"
#include "bregman/trace_io.hpp"

using namespace bregman;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = BREGMAN_CONFIG_DIR;

json qp2d() { return read_json_file(kConfigs + "/qp2d.json"); }

/// A fresh scratch directory per call.
fs::path scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("bregman_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_field(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  json d = qp2d();
  d["geometry"]["kind"] = "cubic";
  CHECK(error_field(d) == "geometry.kind");

  d = qp2d();
  d["mappings"][0]["set"]["a"] = json::array({0, 0, 1});
  CHECK(error_field(d).rfind("mappings[0]", 0) == 0);

  d = qp2d();
  d["bogus"] = 1;
  CHECK(error_field(d) == "bogus");

  d = qp2d();
  d["schedule"]["alpha"] = {{"rule", "constant"}, {"v", 0.5}};
  CHECK(error_field(d).rfind("schedule", 0) == 0);

  d = qp2d();
  d["x1"] = json::array({1, "x"});
  CHECK(error_field(d).rfind("x1", 0) == 0);

  d = qp2d();
  d["witness"] = json::array({1, 0});
  CHECK(error_field(d).rfind("witness", 0) == 0);

  d = qp2d();
  d["algorithm"] = "newton";
  CHECK(error_field(d) == "algorithm");

  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config(kConfigs + "/missing.json"), ConfigError);
  CHECK_THROWS_AS(load_config(std::string(BREGMAN_TEST_DATA) + "/bad_geometry.json"), ConfigError);
}

TEST_CASE("infinite box bounds are encoded as strings") {
  json d = qp2d();
  d["set"] = {{"type", "box"}, {"lower", {"-inf", -3}}, {"upper", {"inf", 3}}};
  const RunConfig cfg = parse_config(d);
  CHECK(cfg.instance.has_value());
  CHECK(echo_config(cfg)["set"]["lower"][0] == "-inf");
}

TEST_CASE("config echo round-trips") {
  for (const char* name : {"qp2d.json", "skew2d.json", "power3_5d.json", "negative_identity.json"}) {
    INFO(name);
    const RunConfig a = load_config(kConfigs + "/" + name);
    const json echo = echo_config(a);
    const RunConfig b = parse_config(echo);
    CHECK(echo_config(b) == echo);
    CHECK(a.instance.has_value() == b.instance.has_value());
    if (a.instance && b.instance) {
      RunOptions o;
      o.stop.max_iter = 50;
      const Trace ta = run_main(*a.instance, a.schedule, o), tb = run_main(*b.instance, b.schedule, o);
      REQUIRE(ta.iterations() == tb.iterations());
      for (int i = 0; i < ta.iterations(); ++i) CHECK(ta.rows[i].x_next == tb.rows[i].x_next);
    }
  }
}

TEST_CASE("overrides") {
  Overrides ov;
  ov.algo = "kumam";
  ov.max_iter = 9;
  ov.seed = 5;
  const RunConfig cfg = parse_config(apply_overrides(qp2d(), ov));
  CHECK(cfg.algorithm == Algorithm::Kumam);
  CHECK(cfg.stop.max_iter == 9);
  CHECK(cfg.seed == 5);
  ov.out = "/tmp/somewhere";
  CHECK(resolve_output("a.csv", ov) == "/tmp/somewhere/a.csv");
  CHECK(resolve_output("/abs/a.csv", ov) == "/abs/a.csv");
  CHECK(resolve_output("", ov).empty());
}

TEST_CASE("cmd_run exit codes and outputs") {
  const fs::path dir = scratch("run");
  Overrides ov;
  ov.out = dir.string();

  const auto ok = cmd_run(parse_config(apply_overrides(qp2d(), ov)), ov);
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.summary["status"] == "Converged");
  CHECK(ok.summary["final_distance_to_witness"].get<double>() <= 1e-4);
  const std::string csv = slurp(dir / "qp2d_trace.csv");
  CHECK(csv.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  CHECK(json::parse(slurp(dir / "qp2d_summary.json"))["iterations"] == ok.trace.iterations());

  Overrides short_ov = ov;
  short_ov.max_iter = 3;
  const auto short_run = cmd_run(parse_config(apply_overrides(qp2d(), short_ov)), short_ov);
  CHECK(short_run.exit_code == kExitIncomplete);
  CHECK(short_run.trace.iterations() == 3);

  // A run that fails inside the scheme exits 1.
  const RunConfig cfg = parse_config(apply_overrides(qp2d(), ov));
  const Trace bad = [&] {
    RunOptions o;
    o.post_step = [](IterationState& st) { st.x_next = PrimalPoint(st.x.coords() * 2.0); };
    return run_main(*cfg.instance, cfg.schedule, o);
  }();
  CHECK(bad.status == RunStatus::Error);

  const RunConfig neg = load_config(kConfigs + "/negative_identity.json");
  CHECK_FALSE(neg.instance.has_value());
  CHECK_THROWS_AS(cmd_run(neg, ov), PreconditionError);
  fs::remove_all(dir);
}

TEST_CASE("cmd_run writes byte-identical traces") {
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  for (const char* name : {"qp2d.json", "power3_5d.json", "skew2d.json"}) {
    INFO(name);
    Overrides o1, o2;
    o1.out = d1.string();
    o2.out = d2.string();
    const json doc = read_json_file(kConfigs + "/" + name);
    const auto r1 = cmd_run(parse_config(apply_overrides(doc, o1)), o1);
    const auto r2 = cmd_run(parse_config(apply_overrides(doc, o2)), o2);
    const std::string trace = parse_config(doc).output.trace;
    CHECK(slurp(d1 / trace) == slurp(d2 / trace));
    CHECK_FALSE(slurp(d1 / trace).empty());
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("cmd_check examples") {
  const fs::path dir = scratch("check");
  Overrides ov;
  ov.out = dir.string();

  const auto core = cmd_check(load_config(kConfigs + "/qp2d.json"), {"core-identities"}, ov);
  REQUIRE(core.reports.size() == 1);
  CHECK(core.exit_code == kExitOk);
  for (const auto& r : core.reports[0].results) {
    CHECK(r.passed);
    CHECK(r.worst <= 1e-10);
  }
  CHECK(json::parse(slurp(dir / "qp2d_report.json"))["passed"] == true);

  const auto skew = cmd_check(load_config(kConfigs + "/skew2d.json"), {"resolvent"}, ov);
  CHECK(skew.exit_code == kExitOk);
  CHECK(skew.reports[0].result("instance:A2").passed);
  CHECK(skew.reports[0].result("instance:bfne").passed);

  const auto neg = cmd_check(load_config(kConfigs + "/negative_identity.json"), {}, ov);
  CHECK(neg.exit_code == kExitIncomplete);
  const auto& res = neg.reports.at(2);
  REQUIRE(res.suite == "resolvent");
  CHECK_FALSE(res.result("instance:A2").passed);
  CHECK(res.result("instance:A2").worst > 0.0);

  CHECK_THROWS_AS(cmd_check(load_config(kConfigs + "/qp2d.json"), {"nope"}, ov), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("full check passes on the shipped instances") {
  for (const char* name : {"qp2d.json", "skew2d.json", "power3_5d.json"}) {
    INFO(name);
    Overrides ov;
    ov.out = scratch("full").string();
    const auto r = cmd_check(load_config(kConfigs + "/" + name), {}, ov);
    for (const auto& rep : r.reports) {
      for (const auto& res : rep.results) {
        INFO(rep.suite << "/" << res.name << " worst=" << res.worst << " " << res.note);
        CHECK(res.passed);
      }
    }
    CHECK(r.exit_code == kExitOk);
    fs::remove_all(*ov.out);
  }
}

TEST_CASE("cmd_sweep examples") {
  const json doc = qp2d();
  const RunConfig cfg = parse_config(doc);
  const auto rows = cmd_sweep(doc, cfg.sweep, 4);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].algo == "main");
  CHECK(rows[0].p == 2.0);
  CHECK(rows[1].p == 3.0);
  CHECK(rows[2].algo == "kumam");
  for (const auto& r : rows) CHECK(r.status == "Converged");

  const auto none = cmd_sweep(doc, SweepGrid{}, 2);
  CHECK(none.empty());
  CHECK(sweep_csv(none) == std::string(kSweepHeader) + "\n");

  SweepGrid g;
  g.max_iter = {1, 20000};
  const auto capped = cmd_sweep(doc, g, 2);
  REQUIRE(capped.size() == 2);
  CHECK(capped[0].status == "MaxIter");
  CHECK(capped[0].iterations == 1);
  CHECK(capped[1].status == "Converged");

  // Sequential and parallel sweeps agree on everything but wall time.
  const auto seq = cmd_sweep(doc, cfg.sweep, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(seq[i].iterations == rows[i].iterations);
    CHECK(seq[i].distance_to_witness == rows[i].distance_to_witness);
  }

  SweepGrid bad;
  bad.s = {2.0};
  const auto err = cmd_sweep(doc, bad, 1);
  REQUIRE(err.size() == 1);
  CHECK(err[0].status == "Error");
}
