#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "shadowlp/experiment.hpp"
#include "shadowlp/instance_io.hpp"

using namespace shadowlp;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse(
      "# comment\n"
      "experiment = lowerbound\n"
      "d = 3   # trailing\n"
      "\n"
      "sigmas = 0.1, 0.25\n"
      "trials=7\n"
      "seed = 42\n"
      "wall_time = true\n"
      "lb_rows = 500\n");
  CHECK(cfg.experiment == "lowerbound");
  CHECK(cfg.d == 3);
  CHECK(cfg.sigmas == std::vector<double>{0.1, 0.25});
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.wall_time);
  CHECK(cfg.lb_rows == std::size_t{500});
  CHECK(cfg.n == 50);

  CHECK_THROWS_AS(parse("dd = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("d = three\n"), ConfigError);
  CHECK_THROWS_AS(parse("d 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("trials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("seed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sigmas = 0.2, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sigmas = 0.1, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sigmas = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("experiment = bogus\n"), ConfigError);
  CHECK_THROWS_AS(parse("rho = 2\n"), ConfigError);
  try {
    parse("d = 3\nbogus = 1\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("instance files") {
  SUBCASE("round trip") {
    RngStream rng(81, 0);
    const LpInstance lp = shadowlp::testing::smoothed_ball(rng, 7, 3, 0.1).lp;
    std::stringstream ss;
    write_instance(ss, lp);
    const LpInstance back = parse_instance(ss);
    CHECK(back.A == lp.A);
    CHECK(back.b == lp.b);
    CHECK(back.c == lp.c);
  }
  SUBCASE("comments and blank lines") {
    std::istringstream in("# box\n2 3\n\n1 0 0 1\n# row 2\n-1 0 0 1\n1 1 1\n");
    const LpInstance lp = parse_instance(in);
    CHECK(lp.rows() == 2);
    CHECK(lp.dim() == 3);
    CHECK(lp.c == Vector::Ones(3));
  }
  SUBCASE("errors carry line numbers") {
    auto line_of = [](const std::string& text) {
      std::istringstream in(text);
      try {
        parse_instance(in);
      } catch (const ParseError& e) {
        return e.line();
      }
      return -1;
    };
    CHECK(line_of("2 3\n1 0 0 1\n1 0 x 1\n1 1 1\n") == 3);
    CHECK(line_of("2 3\n1 0 0 1\n1 0 1\n1 1 1\n") == 3);
    CHECK(line_of("2\n") == 1);
    CHECK(line_of("0 3\n") == 1);
    CHECK(line_of("1 2\n1 1 1\n1 1\n5\n") == 4);
    CHECK(line_of("1 2\n1 1 1\n1 1 1\n") == 3);
    CHECK(line_of("1 2\n1 1 nan\n1 1\n") == 2);
    CHECK(line_of("") == 0);
  }
}

TEST_CASE("log-log slope") {
  CHECK(*log_log_slope({1, 2, 4}, {1, 0.5, 0.25}) == doctest::Approx(-1.0));
  CHECK(*log_log_slope({0.01, 0.1}, {10, 10}) == doctest::Approx(0.0));
  CHECK_FALSE(log_log_slope({1}, {1}));
}

TEST_CASE("shadow-size runs are deterministic and thread-independent") {
  ExperimentConfig cfg;
  cfg.n = 20;
  cfg.sigmas = {0.05, 0.2};
  cfg.trials = 6;
  const auto one = run_shadow_size(cfg, 1);
  const auto four = run_shadow_size(cfg, 4);
  CHECK(one.size() == 12);
  CHECK(shadow_size_csv(one, cfg) == shadow_size_csv(four, cfg));
  for (const ShadowSizeRecord& r : one) {
    CHECK(r.outcome != "error");
    CHECK(r.pivots_total == r.pivots_phase1 + r.pivots_phase2 + r.pivots_phase3);
  }
  const std::string csv = shadow_size_csv(one, cfg);
  CHECK(csv.rfind("schema,experiment,trial", 0) == 0);
  CHECK(count_lines(csv) == 13);
  CHECK(csv.find("wall_ms") == std::string::npos);

  // The same trial index sees the same base instance at every sigma.
  const SmoothedInstance a = shadow_size_instance(cfg, 3, 0.05);
  const SmoothedInstance b = shadow_size_instance(cfg, 3, 0.2);
  CHECK(a.abar == b.abar);
  CHECK(a.noise_A * 4.0 == b.noise_A);

  cfg.wall_time = true;
  CHECK(shadow_size_csv(one, cfg).find(",wall_ms\n") != std::string::npos);
}

TEST_CASE("a single trial summarizes gracefully") {
  ExperimentConfig cfg;
  cfg.n = 20;
  cfg.sigmas = {0.1};
  cfg.trials = 1;
  const auto recs = run_shadow_size(cfg, 1);
  REQUIRE(recs.size() == 1);
  const ShadowSizeSummary s = summarize_shadow_size(recs, cfg.sigmas);
  CHECK(s.per_sigma.size() == 1);
  CHECK_FALSE(s.slope);
  CHECK(s.non_increasing);
  const std::string json = shadow_size_summary_json(s, cfg);
  CHECK(json.find("\"log_log_slope\": null") != std::string::npos);
  CHECK(shadow_size_svg(s).find("<svg") != std::string::npos);
}

TEST_CASE("cone configurations") {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.cone_trials = 2000;
  for (std::size_t k = 0; k < 5; ++k) {
    const ConeConfiguration conf = cone_configuration(cfg, k);
    for (int j = 0; j < 3; ++j) {
      CHECK(conf.B.col(j).norm() >= 1.0);
      CHECK(conf.B.col(j).norm() <= 2.0);
    }
    const ConeRecord r = cone_trial(cfg, k);
    CHECK(r.trials == 2000);
    CHECK(r.pm <= r.p0);
  }
  std::vector<ConeRecord> recs{cone_trial(cfg, 0)};
  CHECK(count_lines(cone_csv(recs, cfg)) == 2);
}

TEST_CASE("output directory and files") {
  const std::filesystem::path base = std::filesystem::temp_directory_path() / "shadowlp_test_experiment";
  std::filesystem::remove_all(base);

  CHECK(resolve_output_dir(std::string("explicit")) == "explicit");
  ::setenv(kOutDirEnv, base.string().c_str(), 1);
  CHECK(resolve_output_dir(std::nullopt) == base.string());
  ::unsetenv(kOutDirEnv);
  CHECK(resolve_output_dir(std::nullopt) == "results");

  ExperimentConfig cfg;
  cfg.n = 15;
  cfg.d = 3;
  cfg.sigmas = {0.05, 0.1};
  cfg.trials = 3;
  const auto first = run_experiment(cfg, 2, (base / "a").string());
  const auto second = run_experiment(cfg, 3, (base / "b").string());
  REQUIRE(first.size() == 3);
  for (std::size_t k = 0; k < first.size(); ++k) CHECK(slurp(first[k]) == slurp(second[k]));

  cfg.experiment = "montecarlo-cone";
  cfg.cone_trials = 500;
  const auto cone = run_experiment(cfg, 2, (base / "c").string());
  CHECK(cone.size() == 2);
  std::filesystem::remove_all(base);
}
