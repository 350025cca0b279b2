// Command-line front end: solve one instance or run an experiment suite.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "shadowlp/errors.hpp"
#include "shadowlp/experiment.hpp"
#include "shadowlp/instance_io.hpp"
#include "shadowlp/three_phase.hpp"

namespace {

using shadowlp::Vector;
using json = nlohmann::ordered_json;

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnbounded = 3;

std::vector<double> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

int cmd_solve(const std::string& path, std::uint64_t seed) {
  const shadowlp::LpInstance lp = shadowlp::read_instance_file(path);
  shadowlp::RngStream rng(seed, 0);
  const shadowlp::SolveReport report = shadowlp::solve(rng, lp);
  const shadowlp::CertificateCheck check = shadowlp::verify_outcome(lp, report.outcome);

  json out;
  out["outcome"] = shadowlp::outcome_name(report.outcome);
  int code = kExitOptimal;
  if (const auto* o = std::get_if<shadowlp::Optimal>(&report.outcome)) {
    out["objective"] = o->objective;
    out["x"] = to_list(o->x);
    out["basis"] = o->basis;
  } else if (const auto* u = std::get_if<shadowlp::Unbounded>(&report.outcome)) {
    out["ray"] = to_list(u->ray);
    out["ray_objective"] = lp.c.dot(u->ray);
    code = kExitUnbounded;
  } else if (const auto* f = std::get_if<shadowlp::Infeasible>(&report.outcome)) {
    out["certificate"] = to_list(f->y);
    out["certificate_rhs"] = f->y.dot(lp.b);
    code = kExitInfeasible;
  }
  out["verified"] = check.ok;
  out["pivots"] = {{"phase1", report.pivots.phase1},
                   {"phase2", report.pivots.phase2},
                   {"phase3", report.pivots.phase3},
                   {"total", report.pivots.total()}};
  out["restarts"] = report.restarts;
  out["seed"] = seed;
  std::cout << out.dump(2) << "\n";
  return code;
}

int cmd_experiment(const std::string& config_path, const std::string& forced, int jobs,
                   const std::optional<std::string>& out_dir) {
  shadowlp::ExperimentConfig cfg = shadowlp::read_config_file(config_path);
  if (!forced.empty()) {
    if (!cfg.experiment.empty() && cfg.experiment != forced) {
      throw shadowlp::ConfigError(fmt::format("config names experiment '{}', command expects '{}'", cfg.experiment,
                                              forced));
    }
    cfg.experiment = forced;
  }
  const std::string dir = shadowlp::resolve_output_dir(out_dir);
  for (const std::string& file : shadowlp::run_experiment(cfg, jobs, dir)) std::cout << file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow vertex LP solver and experiment harness"};
  app.require_subcommand(1);

  std::string instance_path;
  std::uint64_t seed = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file; prints JSON");
  solve_cmd->add_option("file", instance_path, "Instance file")->required();
  solve_cmd->add_option("--seed", seed, "Random seed");

  std::string config_path;
  int jobs = 1;
  std::optional<std::string> out_dir;
  auto add_suite = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_path, "key=value config file")->required();
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_dir, std::string("Output directory (default $") + shadowlp::kOutDirEnv +
                                          " or ./results)");
    return cmd;
  };
  auto* experiment_cmd = add_suite("experiment", "Run the experiment named in the config");
  auto* lowerbound_cmd = add_suite("lowerbound", "Run the lower-bound diameter experiment");
  auto* cone_cmd = add_suite("montecarlo-cone", "Run the segment/cone Monte Carlo experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(instance_path, seed);
    if (experiment_cmd->parsed()) return cmd_experiment(config_path, "", jobs, out_dir);
    if (lowerbound_cmd->parsed()) return cmd_experiment(config_path, "lowerbound", jobs, out_dir);
    if (cone_cmd->parsed()) return cmd_experiment(config_path, "montecarlo-cone", jobs, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
