#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shadowlp/linalg.hpp"
#include "shadowlp/lower_bound.hpp"
#include "shadowlp/random.hpp"
#include "shadowlp/shadow_vertex.hpp"

namespace shadowlp {

inline constexpr const char* kCsvSchema = "shadowlp-experiment-v1";
inline constexpr const char* kOutDirEnv = "SHADOWLP_OUT_DIR";

/// Flat key=value configuration. '#' starts a comment. Unknown keys are errors.
///
/// Keys: experiment, d, n, sigmas (comma separated), trials, seed, stream,
/// pivot_limit, max_restarts, rho, cone_trials, rejection_streak,
/// audit_samples, vertex_guard, lb_rows, wall_time, svg.
struct ExperimentConfig {
  std::string experiment;  // empty means shadow-size
  int d = 4;
  int n = 50;
  std::vector<double> sigmas{0.01, 0.02, 0.05, 0.1, 0.2, 0.5};
  int trials = 200;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::size_t pivot_limit = kDefaultPivotLimit;
  int max_restarts = 64;
  double rho = 0.25;
  std::size_t cone_trials = 100000;
  std::size_t rejection_streak = 20000;
  std::size_t audit_samples = 100000;
  std::size_t vertex_guard = 1'000'000;
  std::optional<std::size_t> lb_rows;
  bool wall_time = false;
  bool svg = true;
};

/// Throws ConfigError naming the line.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig read_config_file(const std::string& path);
/// Throws ConfigError for nonpositive sizes or a sigma grid that is not strictly increasing.
void validate_config(const ExperimentConfig& config);

/// Runs `count` jobs on `jobs` threads; results come back in index order.
template <class T>
std::vector<T> run_indexed(std::size_t count, int jobs, const std::function<T(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Shadow-size scaling
// ---------------------------------------------------------------------------

struct ShadowSizeRecord {
  std::size_t trial = 0;
  std::size_t sigma_index = 0;
  double sigma = 0.0;
  std::string outcome;  // optimal, unbounded, infeasible, or error
  std::size_t pivots_phase1 = 0;
  std::size_t pivots_phase2 = 0;
  std::size_t pivots_phase3 = 0;
  std::size_t pivots_total = 0;
  int restarts = 0;
  std::size_t path_length = 0;
  double freq_M = 0.0;
  double freq_G = 0.0;
  double freq_T = 0.0;
  double freq_H = 0.0;
  double min_projected_norm = 0.0;
  double max_projected_norm = 0.0;
  std::string error;
  double wall_ms = 0.0;
};

/// Instance family: abar rows uniform on the sphere of radius 1/sqrt(2),
/// bbar = 1/sqrt(2), both perturbed, objective e_1. Trial t uses the same
/// random stream for every sigma.
SmoothedInstance shadow_size_instance(const ExperimentConfig& config, std::size_t trial, double sigma);
ShadowSizeRecord shadow_size_trial(const ExperimentConfig& config, std::size_t sigma_index, std::size_t trial);
/// Rows ordered by sigma, then trial.
std::vector<ShadowSizeRecord> run_shadow_size(const ExperimentConfig& config, int jobs);

struct SigmaSummary {
  double sigma = 0.0;
  std::size_t rows = 0;
  std::size_t completed = 0;  // rows without an error
  double mean_pivots = 0.0;
  double median_pivots = 0.0;
  double mean_phase3 = 0.0;
  double geo_mean_attempts = 0.0;  // geometric mean of restarts + 1
};

struct ShadowSizeSummary {
  std::vector<SigmaSummary> per_sigma;
  std::optional<double> slope;  // least-squares slope of log(mean pivots) against log(sigma)
  bool non_increasing = false;
};

ShadowSizeSummary summarize_shadow_size(const std::vector<ShadowSizeRecord>& records,
                                        const std::vector<double>& sigmas);

/// Least-squares slope of log y against log x. Empty for fewer than two points.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string shadow_size_csv(const std::vector<ShadowSizeRecord>& records, const ExperimentConfig& config);
std::string shadow_size_summary_json(const ShadowSizeSummary& summary, const ExperimentConfig& config);
std::string shadow_size_svg(const ShadowSizeSummary& summary);

// ---------------------------------------------------------------------------
// Lower bound
// ---------------------------------------------------------------------------

/// One diameter experiment per (sigma, trial); objective e_1.
LowerBoundRecord lowerbound_trial(const ExperimentConfig& config, std::size_t sigma_index, std::size_t trial);
std::string lowerbound_csv(const std::vector<LowerBoundRecord>& records, const ExperimentConfig& config);
std::string lowerbound_summary_json(const std::vector<LowerBoundRecord>& records, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Cone Monte Carlo
// ---------------------------------------------------------------------------

struct ConeConfiguration {
  Matrix B;  // columns of norm in [1, 2]
  Vector c;
  Vector c2;
};
/// Random (B, c, c2) for configuration index `k`.
ConeConfiguration cone_configuration(const ExperimentConfig& config, std::size_t k);

struct ConeRecord {
  std::size_t config_index = 0;
  double m = 0.0;
  std::size_t trials = 0;
  double p0 = 0.0;
  double pm = 0.0;
  double stderr_diff = 0.0;
  bool holds = false;  // pm >= 0.99 p0 - 3 stderr
};
ConeRecord cone_trial(const ExperimentConfig& config, std::size_t k);
std::string cone_csv(const std::vector<ConeRecord>& records, const ExperimentConfig& config);
std::string cone_summary_json(const std::vector<ConeRecord>& records, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// `explicit_dir` if set, else $SHADOWLP_OUT_DIR, else "results".
std::string resolve_output_dir(const std::optional<std::string>& explicit_dir);

/// Runs the experiment named in the config and writes its files into `dir`.
/// Returns the paths written.
std::vector<std::string> run_experiment(const ExperimentConfig& config, int jobs, const std::string& dir);

}  // namespace shadowlp

#include "shadowlp/detail/run_indexed.hpp"
