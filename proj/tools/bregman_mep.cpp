// bregman_mep: run, check and sweep driver for the mixed-equilibrium toolkit.

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <string>
#include <vector>

#include "bregman/harness.hpp"

namespace {

using namespace bregman;

struct Args {
  std::string config;
  std::string algo;
  int max_iter = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> suites;
  int jobs = 1;
};

Overrides overrides(const CLI::App& sub, const Args& a) {
  Overrides ov;
  if (sub.count("--algo")) ov.algo = a.algo;
  if (sub.count("--max-iter")) ov.max_iter = a.max_iter;
  if (sub.count("--seed")) ov.seed = a.seed;
  if (sub.count("--out")) ov.out = a.out;
  return ov;
}

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config, "JSON instance description")->required()->check(CLI::ExistingFile);
  sub->add_option("--algo", a.algo, "main | halpern | zegeye | kumam");
  sub->add_option("--max-iter", a.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  sub->add_option("--seed", a.seed, "seed for every sampler");
  sub->add_option("--out", a.out, "output directory");
}

int do_run(const CLI::App& sub, const Args& a) {
  const Overrides ov = overrides(sub, a);
  const RunConfig cfg = parse_config(apply_overrides(read_json_file(a.config), ov));
  spdlog::info("run: algorithm={} dim={} geometry={}", to_string(cfg.algorithm), cfg.geometry.dim(),
               to_string(cfg.geometry.kind()));
  const RunOutcome r = cmd_run(cfg, ov);
  spdlog::info("run: status={} iterations={} wall={:.3f}s", to_string(r.trace.status), r.trace.iterations(),
               r.trace.wall_seconds);
  for (const auto& w : r.trace.warnings) spdlog::warn("{}", w);
  if (r.trace.status == RunStatus::Error) spdlog::error("{}", r.trace.error_message);
  std::cout << r.summary.dump(2) << '\n';
  return r.exit_code;
}

int do_check(const CLI::App& sub, const Args& a) {
  const Overrides ov = overrides(sub, a);
  const RunConfig cfg = parse_config(apply_overrides(read_json_file(a.config), ov));
  const CheckOutcome c = cmd_check(cfg, a.suites, ov);
  for (const auto& rep : c.reports) {
    for (const auto& r : rep.results) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << rep.suite << '/' << r.name << " worst=" << r.worst
                << " bound=" << r.bound << " samples=" << r.samples << '\n';
    }
  }
  return c.exit_code;
}

int do_sweep(const CLI::App& sub, const Args& a) {
  const Overrides ov = overrides(sub, a);
  const nlohmann::json doc = apply_overrides(read_json_file(a.config), ov);
  const RunConfig cfg = parse_config(doc);
  const auto rows = cmd_sweep(doc, cfg.sweep, a.jobs);
  const std::string csv = sweep_csv(rows);
  const std::string path = resolve_output(cfg.output.sweep, ov);
  std::cout << csv;
  if (!path.empty()) {
    write_text(path, csv);
    spdlog::info("sweep: {} cells written to {}", rows.size(), path);
  }
  for (const auto& r : rows) {
    if (!r.message.empty()) spdlog::warn("sweep cell {}: {}", r.algo, r.message);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();

  CLI::App app{"Bregman fixed-point and mixed equilibrium solver"};
  app.require_subcommand(1);
  Args a;
  auto* run = app.add_subcommand("run", "run one scheme and write its trace");
  add_common(run, a);
  auto* check = app.add_subcommand("check", "run invariant suites");
  add_common(check, a);
  check->add_option("--suite", a.suites, "core-identities | projection | resolvent | algorithm");
  auto* sweep = app.add_subcommand("sweep", "run the config's parameter grid");
  add_common(sweep, a);
  sweep->add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(*run, a);
    if (check->parsed()) return do_check(*check, a);
    return do_sweep(*sweep, a);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << (e.field().empty() ? "<document>" : e.field()) << "]: " << e.what() << '\n';
  } catch (const bregman::Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}
