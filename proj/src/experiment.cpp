#include "shadowlp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <fmt/format.h>
#include <json.hpp>

#include "shadowlp/errors.hpp"
#include "shadowlp/path_analysis.hpp"
#include "shadowlp/three_phase.hpp"

namespace shadowlp {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, int line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("line {}: '{}' is not a valid value for {}", line, value, key));
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(fmt::format("line {}: '{}' is not a boolean for {}", line, value, key));
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key=value", line));
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw ConfigError(fmt::format("line {}: empty value for {}", line, key));

    if (key == "experiment") {
      cfg.experiment = value;
    } else if (key == "d") {
      cfg.d = parse_number<int>(key, value, line);
    } else if (key == "n") {
      cfg.n = parse_number<int>(key, value, line);
    } else if (key == "sigmas" || key == "sigma") {
      cfg.sigmas.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.sigmas.push_back(parse_number<double>(key, trim(item), line));
    } else if (key == "trials") {
      cfg.trials = parse_number<int>(key, value, line);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value, line);
    } else if (key == "stream") {
      cfg.stream = parse_number<std::uint64_t>(key, value, line);
    } else if (key == "pivot_limit") {
      cfg.pivot_limit = parse_number<std::size_t>(key, value, line);
    } else if (key == "max_restarts") {
      cfg.max_restarts = parse_number<int>(key, value, line);
    } else if (key == "rho") {
      cfg.rho = parse_number<double>(key, value, line);
    } else if (key == "cone_trials") {
      cfg.cone_trials = parse_number<std::size_t>(key, value, line);
    } else if (key == "rejection_streak") {
      cfg.rejection_streak = parse_number<std::size_t>(key, value, line);
    } else if (key == "audit_samples") {
      cfg.audit_samples = parse_number<std::size_t>(key, value, line);
    } else if (key == "vertex_guard") {
      cfg.vertex_guard = parse_number<std::size_t>(key, value, line);
    } else if (key == "lb_rows") {
      cfg.lb_rows = parse_number<std::size_t>(key, value, line);
    } else if (key == "wall_time") {
      cfg.wall_time = parse_bool(key, value, line);
    } else if (key == "svg") {
      cfg.svg = parse_bool(key, value, line);
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line, key));
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  if (!cfg.experiment.empty() && cfg.experiment != "shadow-size" && cfg.experiment != "lowerbound" &&
      cfg.experiment != "montecarlo-cone") {
    throw ConfigError(fmt::format("unknown experiment '{}'", cfg.experiment));
  }
  if (cfg.d <= 0 || cfg.n <= 0 || cfg.trials <= 0 || cfg.max_restarts <= 0 || cfg.pivot_limit == 0 ||
      cfg.cone_trials == 0 || cfg.rejection_streak == 0 || cfg.audit_samples == 0 || cfg.vertex_guard == 0 ||
      (cfg.lb_rows && *cfg.lb_rows == 0)) {
    throw ConfigError("numeric settings must be positive");
  }
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0)) throw ConfigError("rho must lie in (0, 1]");
  if (cfg.sigmas.empty()) throw ConfigError("sigma grid is empty");
  for (std::size_t k = 0; k < cfg.sigmas.size(); ++k) {
    if (!(cfg.sigmas[k] > 0.0) || !std::isfinite(cfg.sigmas[k])) throw ConfigError("sigmas must be positive");
    if (k > 0 && !(cfg.sigmas[k] > cfg.sigmas[k - 1])) throw ConfigError("sigma grid must be strictly increasing");
  }
}

// ---------------------------------------------------------------------------
// Shadow-size scaling
// ---------------------------------------------------------------------------

namespace {

RngStream trial_stream(const ExperimentConfig& cfg, std::size_t trial) {
  return RngStream(cfg.seed, cfg.stream).derive(static_cast<std::uint64_t>(trial));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

SmoothedInstance shadow_size_instance(const ExperimentConfig& cfg, std::size_t trial, double sigma) {
  RngStream rng = trial_stream(cfg, trial).derive(1);
  const double h = 1.0 / std::sqrt(2.0);
  Matrix abar(cfg.n, cfg.d);
  for (int i = 0; i < cfg.n; ++i) abar.row(i) = h * uniform_sphere(rng, cfg.d).transpose();
  const Vector bbar = Vector::Constant(cfg.n, h);
  Vector c = Vector::Zero(cfg.d);
  c(0) = 1.0;
  return smoothed_instance(rng, abar, bbar, c, sigma, true);
}

ShadowSizeRecord shadow_size_trial(const ExperimentConfig& cfg, std::size_t sigma_index, std::size_t trial) {
  ShadowSizeRecord rec;
  rec.trial = trial;
  rec.sigma_index = sigma_index;
  rec.sigma = cfg.sigmas.at(sigma_index);
  const auto start = std::chrono::steady_clock::now();
  try {
    const SmoothedInstance inst = shadow_size_instance(cfg, trial, rec.sigma);
    RngStream solver_rng = trial_stream(cfg, trial).derive(2);
    SolverOptions options;
    options.max_restarts = cfg.max_restarts;
    options.pivot_limit = cfg.pivot_limit;
    const SolveReport report = solve(solver_rng, inst.lp, options);
    rec.outcome = outcome_name(report.outcome);
    rec.pivots_phase1 = report.pivots.phase1;
    rec.pivots_phase2 = report.pivots.phase2;
    rec.pivots_phase3 = report.pivots.phase3;
    rec.pivots_total = report.pivots.total();
    rec.restarts = report.restarts;
    if (report.phase3_path && report.phase3_path->size() > 0) {
      const ShadowPath& path = *report.phase3_path;
      rec.path_length = path.size();
      const ConstraintView sys{inst.lp.A, inst.lp.b};
      try {
        const PathReport pr = classify_path(sys, path, margin_threshold(cfg.d),
                                            slack_threshold(rec.sigma, cfg.n, cfg.d), cfg.rho,
                                            make_frame(inst.lp.c, report.Z));
        const double len = static_cast<double>(path.size());
        rec.freq_M = static_cast<double>(pr.count_M) / len;
        rec.freq_G = static_cast<double>(pr.count_G) / len;
        rec.freq_T = static_cast<double>(pr.count_T) / len;
        rec.freq_H = static_cast<double>(pr.count_H) / len;
        rec.min_projected_norm = pr.min_projected_norm;
        rec.max_projected_norm = pr.max_projected_norm;
      } catch (const Error&) {
        // Z parallel to c leaves no projection plane; path statistics stay zero.
      }
    }
  } catch (const Error& e) {
    rec.outcome = "error";
    rec.error = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<ShadowSizeRecord> run_shadow_size(const ExperimentConfig& cfg, int jobs) {
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t count = cfg.sigmas.size() * trials;
  return run_indexed<ShadowSizeRecord>(
      count, jobs, [&](std::size_t i) { return shadow_size_trial(cfg, i / trials, i % trials); });
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
    if (x[k] > 0.0 && y[k] > 0.0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ShadowSizeSummary summarize_shadow_size(const std::vector<ShadowSizeRecord>& records,
                                        const std::vector<double>& sigmas) {
  ShadowSizeSummary out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    SigmaSummary sum;
    sum.sigma = sigmas[s];
    std::vector<double> totals;
    double phase3 = 0.0;
    double log_attempts = 0.0;
    for (const ShadowSizeRecord& r : records) {
      if (r.sigma_index != s) continue;
      ++sum.rows;
      if (r.outcome == "error") continue;
      totals.push_back(static_cast<double>(r.pivots_total));
      phase3 += static_cast<double>(r.pivots_phase3);
      log_attempts += std::log(r.restarts + 1.0);
    }
    sum.completed = totals.size();
    if (!totals.empty()) {
      const double n = static_cast<double>(totals.size());
      sum.mean_pivots = std::accumulate(totals.begin(), totals.end(), 0.0) / n;
      sum.mean_phase3 = phase3 / n;
      sum.geo_mean_attempts = std::exp(log_attempts / n);
      std::sort(totals.begin(), totals.end());
      const std::size_t mid = totals.size() / 2;
      sum.median_pivots = totals.size() % 2 ? totals[mid] : 0.5 * (totals[mid - 1] + totals[mid]);
      xs.push_back(sum.sigma);
      ys.push_back(sum.mean_pivots);
    }
    out.per_sigma.push_back(sum);
  }
  out.slope = log_log_slope(xs, ys);
  out.non_increasing = true;
  for (std::size_t k = 1; k < out.per_sigma.size(); ++k)
    if (out.per_sigma[k].mean_pivots > out.per_sigma[k - 1].mean_pivots) out.non_increasing = false;
  return out;
}

std::string shadow_size_csv(const std::vector<ShadowSizeRecord>& records, const ExperimentConfig& cfg) {
  std::string out =
      "schema,experiment,trial,seed,stream,d,n,sigma,outcome,pivots_phase1,pivots_phase2,pivots_phase3,"
      "pivots_total,restarts,path_length,freq_M,freq_G,freq_T,freq_H,min_projected_norm,max_projected_norm,error";
  out += cfg.wall_time ? ",wall_ms\n" : "\n";
  for (const ShadowSizeRecord& r : records) {
    out += fmt::format("{},shadow-size,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", kCsvSchema,
                       r.trial, cfg.seed, cfg.stream, cfg.d, cfg.n, r.sigma, r.outcome, r.pivots_phase1,
                       r.pivots_phase2, r.pivots_phase3, r.pivots_total, r.restarts, r.path_length, r.freq_M,
                       r.freq_G, r.freq_T, r.freq_H, r.min_projected_norm, r.max_projected_norm, csv_field(r.error));
    out += cfg.wall_time ? fmt::format(",{:.3f}\n", r.wall_ms) : "\n";
  }
  return out;
}

namespace {

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["experiment"] = cfg.experiment.empty() ? "shadow-size" : cfg.experiment;
  j["d"] = cfg.d;
  j["n"] = cfg.n;
  j["sigmas"] = cfg.sigmas;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["stream"] = cfg.stream;
  return j;
}

}  // namespace

std::string shadow_size_summary_json(const ShadowSizeSummary& summary, const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema"] = kCsvSchema;
  j["config"] = config_json(cfg);
  ordered_json rows = ordered_json::array();
  for (const SigmaSummary& s : summary.per_sigma) {
    rows.push_back({{"sigma", s.sigma},
                    {"rows", s.rows},
                    {"completed", s.completed},
                    {"mean_pivots", s.mean_pivots},
                    {"median_pivots", s.median_pivots},
                    {"mean_phase3_pivots", s.mean_phase3},
                    {"geo_mean_attempts", s.geo_mean_attempts}});
  }
  j["per_sigma"] = rows;
  j["log_log_slope"] = summary.slope ? ordered_json(*summary.slope) : ordered_json(nullptr);
  j["non_increasing"] = summary.non_increasing;
  return j.dump(2) + "\n";
}

std::string shadow_size_svg(const ShadowSizeSummary& summary) {
  constexpr double W = 640.0;
  constexpr double H = 400.0;
  constexpr double margin = 60.0;
  std::vector<std::pair<double, double>> pts;
  for (const SigmaSummary& s : summary.per_sigma)
    if (s.sigma > 0.0 && s.mean_pivots > 0.0) pts.emplace_back(std::log10(s.sigma), std::log10(s.mean_pivots));

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      W, H);
  if (pts.empty()) return out + "</svg>\n";

  double x0 = pts.front().first, x1 = x0, y0 = pts.front().second, y1 = y0;
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const double pad_y = 0.1 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;
  auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (W - 2 * margin); };
  auto sy = [&](double y) { return H - margin - (y - y0) / (y1 - y0) * (H - 2 * margin); };

  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", margin, H - margin,
                     W - margin);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", margin, H - margin,
                     margin);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">log10 sigma</text>\n", W / 2,
                     H - 15);
  out += fmt::format(
      "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 {})\">log10 mean "
      "pivots</text>\n",
      H / 2, H / 2);
  for (const auto& [x, y] : pts) {
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"steelblue\"/>\n", sx(x), sy(y));
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\">{:.3g}</text>\n", sx(x) + 6, sy(y) - 6,
                       std::pow(10.0, y));
  }
  if (summary.slope && pts.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    const double s = *summary.slope;
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"firebrick\" stroke-dasharray=\"6 4\"/>\n",
        sx(x0), sy(my + s * (x0 - mx)), sx(x1), sy(my + s * (x1 - mx)));
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"firebrick\">slope {:.3f}</text>\n",
                       W - margin - 90, margin - 10, s);
  }
  return out + "</svg>\n";
}

// ---------------------------------------------------------------------------
// Lower bound
// ---------------------------------------------------------------------------

LowerBoundRecord lowerbound_trial(const ExperimentConfig& cfg, std::size_t sigma_index, std::size_t trial) {
  const double sigma = cfg.sigmas.at(sigma_index);
  RngStream rng = RngStream(cfg.seed, cfg.stream).derive(sigma_index).derive(trial);
  LowerBoundOptions options;
  options.rejection_streak = cfg.rejection_streak;
  options.audit_samples = cfg.audit_samples;
  options.vertex_guard = cfg.vertex_guard;
  options.n = cfg.lb_rows;
  Vector c = Vector::Zero(cfg.d);
  c(0) = 1.0;
  try {
    return diameter_experiment(rng, cfg.d, sigma, c, options);
  } catch (const Error& e) {
    LowerBoundRecord rec;
    rec.d = cfg.d;
    rec.sigma = sigma;
    rec.error = e.what();
    return rec;
  }
}

std::string lowerbound_csv(const std::vector<LowerBoundRecord>& records, const ExperimentConfig& cfg) {
  std::string out =
      "schema,experiment,trial,seed,stream,d,n,sigma,dense_eta,packing_size,rejection_streak,eta,in_regime,"
      "norm_event,inner_radius,outer_radius,sandwich_ok,facet_precondition,gamma,facet_bound,facet_ok,R_measured,R_formula,vertices,"
      "edges,distance,bound,distance_ok,solver_pivots,error\n";
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const LowerBoundRecord& r = records[k];
    const bool ran = r.error.empty();
    out += fmt::format("{},lowerbound,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                       kCsvSchema, k % trials, cfg.seed, cfg.stream, r.d, r.n, r.sigma, r.dense_eta, r.packing_size,
                       r.rejection_streak, r.eta, r.sandwich.in_regime, r.norm_event, r.sandwich.inner_radius,
                       r.sandwich.outer_radius, ran && r.sandwich_ok(), r.facet_precondition, r.gamma, r.facet_bound,
                       ran && r.facet_ok(), r.R_measured, r.R_formula,
                       r.vertices, r.edges, r.distance, r.bound, ran && r.distance_ok(),
                       r.solver_pivots, csv_field(r.error));
  }
  return out;
}

std::string lowerbound_summary_json(const std::vector<LowerBoundRecord>& records, const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema"] = kCsvSchema;
  j["config"] = config_json(cfg);
  std::size_t failed = 0, sandwich = 0, facet = 0, distance = 0;
  int min_distance = std::numeric_limits<int>::max();
  for (const LowerBoundRecord& r : records) {
    if (!r.error.empty()) {
      ++failed;
      continue;
    }
    sandwich += !r.sandwich_ok();
    facet += !r.facet_ok();
    distance += !r.distance_ok();
    min_distance = std::min(min_distance, r.distance);
  }
  j["runs"] = records.size();
  j["failed_runs"] = failed;
  j["sandwich_violations"] = sandwich;
  j["facet_violations"] = facet;
  j["distance_violations"] = distance;
  j["min_distance"] = failed == records.size() ? ordered_json(nullptr) : ordered_json(min_distance);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Cone Monte Carlo
// ---------------------------------------------------------------------------

ConeConfiguration cone_configuration(const ExperimentConfig& cfg, std::size_t k) {
  RngStream rng = RngStream(cfg.seed, cfg.stream).derive(k).derive(1);
  ConeConfiguration out;
  out.B = gaussian_matrix(rng, cfg.d, cfg.d, 1.0);
  for (int j = 0; j < cfg.d; ++j) out.B.col(j) *= (1.0 + rng.uniform()) / out.B.col(j).norm();
  out.c = out.B * gaussian_vector(rng, Vector::Zero(cfg.d), 2.0);
  out.c2 = out.B * gaussian_vector(rng, Vector::Zero(cfg.d), 2.0);
  return out;
}

ConeRecord cone_trial(const ExperimentConfig& cfg, std::size_t k) {
  const ConeConfiguration conf = cone_configuration(cfg, k);
  RngStream rng = RngStream(cfg.seed, cfg.stream).derive(k).derive(2);
  ConeRecord rec;
  rec.config_index = k;
  rec.m = margin_threshold(cfg.d);
  const ConeTrialResult r = segment_cone_trial(rng, conf.B, conf.c, conf.c2, rec.m, cfg.cone_trials);
  rec.trials = r.trials;
  rec.p0 = r.p0;
  rec.pm = r.pm;
  rec.stderr_diff = r.stderr_diff;
  rec.holds = r.pm >= 0.99 * r.p0 - 3.0 * r.stderr_diff;
  return rec;
}

std::string cone_csv(const std::vector<ConeRecord>& records, const ExperimentConfig& cfg) {
  std::string out = "schema,experiment,config,seed,stream,d,m,trials,p0,pm,stderr_diff,holds\n";
  for (const ConeRecord& r : records) {
    out += fmt::format("{},montecarlo-cone,{},{},{},{},{},{},{},{},{},{}\n", kCsvSchema, r.config_index, cfg.seed,
                       cfg.stream, cfg.d, r.m, r.trials, r.p0, r.pm, r.stderr_diff, r.holds);
  }
  return out;
}

std::string cone_summary_json(const std::vector<ConeRecord>& records, const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema"] = kCsvSchema;
  j["config"] = config_json(cfg);
  j["config"]["cone_trials"] = cfg.cone_trials;
  std::size_t holds = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const ConeRecord& r : records) {
    holds += r.holds;
    if (r.p0 > 0.0) min_ratio = std::min(min_ratio, r.pm / r.p0);
  }
  j["configurations"] = records.size();
  j["holding"] = holds;
  j["min_pm_over_p0"] = std::isfinite(min_ratio) ? ordered_json(min_ratio) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

std::string resolve_output_dir(const std::optional<std::string>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

namespace {

std::string write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  const std::filesystem::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", p.string()));
  out << content;
  if (!out) throw Error(fmt::format("write to '{}' failed", p.string()));
  return p.string();
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, int jobs, const std::string& dir) {
  validate_config(cfg);
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const std::string name = cfg.experiment.empty() ? "shadow-size" : cfg.experiment;
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);

  if (name == "shadow-size") {
    const auto records = run_shadow_size(cfg, jobs);
    const ShadowSizeSummary summary = summarize_shadow_size(records, cfg.sigmas);
    written.push_back(write_file(dir, "shadow-size.csv", shadow_size_csv(records, cfg)));
    written.push_back(write_file(dir, "shadow-size_summary.json", shadow_size_summary_json(summary, cfg)));
    if (cfg.svg) written.push_back(write_file(dir, "shadow-size.svg", shadow_size_svg(summary)));
  } else if (name == "lowerbound") {
    const auto records = run_indexed<LowerBoundRecord>(
        cfg.sigmas.size() * trials, jobs, [&](std::size_t i) { return lowerbound_trial(cfg, i / trials, i % trials); });
    written.push_back(write_file(dir, "lowerbound.csv", lowerbound_csv(records, cfg)));
    written.push_back(write_file(dir, "lowerbound_summary.json", lowerbound_summary_json(records, cfg)));
  } else {
    const auto records =
        run_indexed<ConeRecord>(trials, jobs, [&](std::size_t k) { return cone_trial(cfg, k); });
    written.push_back(write_file(dir, "montecarlo-cone.csv", cone_csv(records, cfg)));
    written.push_back(write_file(dir, "montecarlo-cone_summary.json", cone_summary_json(records, cfg)));
  }
  return written;
}

}  // namespace shadowlp
