#include "shadowlp/path_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fmt/format.h>

#include "shadowlp/errors.hpp"

namespace shadowlp {

MarginResult multiplier_margin(const Basis& basis, const Vector& c, const Vector& c2) {
  const Vector alpha = multipliers(basis, c);
  const Vector beta = multipliers(basis, c2) - alpha;
  auto value = [&](double lambda) { return (alpha + lambda * beta).minCoeff(); };

  std::vector<double> candidates{0.0, 1.0};
  const Eigen::Index d = alpha.size();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double slope = beta(i) - beta(j);
      if (slope == 0.0) continue;
      const double lambda = (alpha(j) - alpha(i)) / slope;
      if (lambda > 0.0 && lambda < 1.0) candidates.push_back(lambda);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  MarginResult best{value(candidates.front()), candidates.front()};
  for (double lambda : candidates) {
    const double v = value(lambda);
    if (v > best.margin) best = {v, lambda};
  }
  return best;
}

double relative_slack(ConstraintView sys, const Basis& basis) {
  const double norm = basis.x.norm();
  if (norm < 1e-12) throw ZeroVertex(fmt::format("relative_slack: vertex norm {:.3g}", norm));
  const Vector slack = sys.b - sys.A * basis.x;
  double out = std::numeric_limits<double>::infinity();
  for (int j = 0; j < sys.rows(); ++j)
    if (!basis.contains(j)) out = std::min(out, slack(j));
  return out / norm;
}

double margin_threshold(int d) { return std::log(1.0 / 0.99) / (2.0 * d); }

double slack_threshold(double sigma, int n, int d) {
  return sigma / (5000.0 * std::pow(d, 1.5) * std::pow(std::log(static_cast<double>(n)), 1.5));
}

// ---------------------------------------------------------------------------
// Path classification
// ---------------------------------------------------------------------------

namespace {

std::vector<Eigen::Vector2d> project_path(const ShadowPath& path, const ProjectionFrame& frame) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(path.size());
  for (const Basis& b : path.bases) out.push_back(frame.project(b.x));
  return out;
}

bool far_from(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double rho) {
  return (p - q).norm() >= rho * p.norm();
}

}  // namespace

std::size_t count_triples(const std::vector<bool>& in_S) {
  std::size_t out = 0;
  for (std::size_t k = 1; k + 1 < in_S.size(); ++k)
    if (in_S[k] && in_S[k - 1] && in_S[k + 1]) ++out;
  return out;
}

bool triples_inequality_holds(const std::vector<bool>& in_S, std::size_t components) {
  const std::size_t s = static_cast<std::size_t>(std::count(in_S.begin(), in_S.end(), true));
  return 3 * s <= 2 * components + count_triples(in_S) + 2 * in_S.size();
}

std::size_t count_hermits(const ShadowPath& path, const ProjectionFrame& frame, double rho) {
  const auto pts = project_path(path, frame);
  std::size_t out = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    bool hermit = true;
    if (k > 0) hermit = hermit && far_from(pts[k], pts[k - 1], rho);
    if (k + 1 < pts.size()) hermit = hermit && far_from(pts[k], pts[k + 1], rho);
    if (hermit) ++out;
  }
  return out;
}

PathReport classify_path(ConstraintView sys, const ShadowPath& path, double m, double g, double rho,
                         const std::optional<ProjectionFrame>& frame) {
  const ProjectionFrame f = frame ? *frame : make_frame(path.end_objective, path.start_objective);
  const auto pts = project_path(path, f);

  PathReport report;
  report.m = m;
  report.g = g;
  report.rho = rho;
  report.records.resize(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    BasisRecord& rec = report.records[k];
    const Basis& b = path.bases[k];
    rec.basis = b.indices;
    const MarginResult mr = multiplier_margin(b, path.start_objective, path.end_objective);
    rec.margin = mr.margin;
    rec.margin_lambda = mr.lambda;
    try {
      rec.slack = relative_slack(sys, b);
    } catch (const ZeroVertex&) {
    }
    rec.projected_norm = pts[k].norm();
    if (k > 0) rec.prev_distance = (pts[k] - pts[k - 1]).norm() / rec.projected_norm;
    if (k + 1 < pts.size()) rec.next_distance = (pts[k] - pts[k + 1]).norm() / rec.projected_norm;
    rec.in_M = rec.margin >= m;
    rec.in_G = rec.slack && *rec.slack >= g;
    rec.in_S = rec.in_M && rec.in_G;
    rec.in_H = (k == 0 || far_from(pts[k], pts[k - 1], rho)) && (k + 1 == pts.size() || far_from(pts[k], pts[k + 1], rho));
  }
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    auto& r = report.records;
    r[k].in_T = r[k].in_S && r[k - 1].in_S && r[k + 1].in_S;
  }
  report.min_projected_norm = std::numeric_limits<double>::infinity();
  report.max_projected_norm = 0.0;
  for (const BasisRecord& rec : report.records) {
    report.count_M += rec.in_M;
    report.count_G += rec.in_G;
    report.count_S += rec.in_S;
    report.count_T += rec.in_T;
    report.count_H += rec.in_H;
    report.min_projected_norm = std::min(report.min_projected_norm, rec.projected_norm);
    report.max_projected_norm = std::max(report.max_projected_norm, rec.projected_norm);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Boundary integral over an annulus
// ---------------------------------------------------------------------------

namespace {

// Integral of 1/sqrt(u^2 + h2) du over [u1, u2], written so that neither side
// of u = 0 cancels catastrophically.
double line_integral(double u1, double u2, double h2) {
  if (u1 >= u2) return 0.0;
  if (u1 < 0.0 && u2 > 0.0) return line_integral(u1, 0.0, h2) + line_integral(0.0, u2, h2);
  const double r1 = std::sqrt(u1 * u1 + h2);
  const double r2 = std::sqrt(u2 * u2 + h2);
  if (u1 >= 0.0) return std::log((u2 + r2) / (u1 + r1));
  return std::log((r1 - u1) / (r2 - u2));
}

// {t : t^2 + 2 bt + c <= radius^2}, empty when lo > hi.
std::pair<double, double> disc_interval(double b, double c, double radius) {
  const double disc = b * b - c + radius * radius;
  if (disc <= 0.0) return {1.0, 0.0};
  const double s = std::sqrt(disc);
  return {-b - s, -b + s};
}

}  // namespace

double segment_integral(const Eigen::Vector2d& p, const Eigen::Vector2d& v, double t0, double t1, double R,
                        double r) {
  if (!(t1 > t0)) return 0.0;
  const double b = p.dot(v);
  const double c = p.squaredNorm();
  const double h2 = std::max(c - b * b, 0.0);

  const auto outer = disc_interval(b, c, R);
  const double lo = std::max(t0, outer.first);
  const double hi = std::min(t1, outer.second);
  if (!(hi > lo)) return 0.0;

  const auto inner = disc_interval(b, c, r);
  auto piece = [&](double a, double z) { return z > a ? line_integral(a + b, z + b, h2) : 0.0; };
  if (!(inner.second > inner.first)) return piece(lo, hi);
  return piece(lo, std::min(hi, inner.first)) + piece(std::max(lo, inner.second), hi);
}

double boundary_integral(const std::vector<Eigen::Vector2d>& closed_polygon, double R, double r) {
  double total = 0.0;
  const std::size_t n = closed_polygon.size();
  if (n < 2) return 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d& p = closed_polygon[k];
    const Eigen::Vector2d e = closed_polygon[(k + 1) % n] - p;
    const double len = e.norm();
    if (len == 0.0) continue;
    total += segment_integral(p, e / len, 0.0, len, R, r);
    if (n == 2) break;
  }
  return total;
}

double boundary_integral(const ShadowPolygon& polygon, double R, double r) {
  const auto pts = polygon.points();
  if (polygon.bounded) return boundary_integral(pts, R, r);
  if (pts.empty()) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Eigen::Vector2d e = pts[k + 1] - pts[k];
    const double len = e.norm();
    if (len > 0.0) total += segment_integral(pts[k], e / len, 0.0, len, R, r);
  }
  if (polygon.ray_first.norm() > 0.0) total += segment_integral(pts.front(), polygon.ray_first.normalized(), 0.0, inf, R, r);
  if (polygon.ray_last.norm() > 0.0) total += segment_integral(pts.back(), polygon.ray_last.normalized(), 0.0, inf, R, r);
  return total;
}

std::vector<double> exterior_angles(const std::vector<Eigen::Vector2d>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw NonConvexInput(fmt::format("exterior_angles: {} vertices", n));
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d in = polygon[k] - polygon[(k + n - 1) % n];
    const Eigen::Vector2d next = polygon[(k + 1) % n] - polygon[k];
    const double angle = std::atan2(in.x() * next.y() - in.y() * next.x(), in.dot(next));
    if (!(angle > 0.0 && angle < std::numbers::pi)) {
      throw NonConvexInput(fmt::format("exterior_angles: turning angle {:.6g} at vertex {}", angle, k));
    }
    out[k] = angle;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cone experiment
// ---------------------------------------------------------------------------

namespace {

// Whether {lambda in [0, 1] : alpha + lambda beta >= threshold} is nonempty.
bool segment_hits(const Vector& alpha, const Vector& beta, double threshold) {
  double lo = 0.0;
  double hi = 1.0;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    const double a = alpha(k) - threshold;
    const double s = beta(k);
    if (s == 0.0) {
      if (a < 0.0) return false;
    } else if (s > 0.0) {
      lo = std::max(lo, -a / s);
    } else {
      hi = std::min(hi, -a / s);
    }
    if (lo > hi) return false;
  }
  return true;
}

}  // namespace

ConeTrialResult segment_cone_trial(RngStream& rng, const Matrix& B, const Vector& c, const Vector& c2, double m,
                                   std::size_t trials) {
  const BasisFactorization lu(B);
  const Vector base = lu.solve(c);
  const Vector beta = lu.solve(c2) - base;
  const int d = static_cast<int>(B.rows());

  ConeTrialResult out;
  out.trials = trials;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Vector alpha = base + lu.solve(exp_ball_sample(rng, d));
    const bool h0 = segment_hits(alpha, beta, 0.0);
    const bool hm = h0 && segment_hits(alpha, beta, m);
    out.hits0 += h0;
    out.hits_m += hm;
    const double diff = (hm ? 1.0 : 0.0) - 0.99 * (h0 ? 1.0 : 0.0);
    sum += diff;
    sum_sq += diff * diff;
  }
  if (trials > 0) {
    const double nt = static_cast<double>(trials);
    out.p0 = static_cast<double>(out.hits0) / nt;
    out.pm = static_cast<double>(out.hits_m) / nt;
    const double mean = sum / nt;
    const double var = trials > 1 ? std::max(0.0, (sum_sq - nt * mean * mean) / (nt - 1.0)) : 0.0;
    out.stderr_diff = std::sqrt(var / nt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Objective schedule
// ---------------------------------------------------------------------------

int schedule_length(int n, int d) {
  const double t = 2.0 * std::numbers::e * d * std::log(static_cast<double>(n));
  return 5 * d * static_cast<int>(std::ceil(std::log2(n * t)));
}

ObjectiveSchedule build_schedule(const Vector& c, const Vector& Z, int n, int d, std::optional<int> k) {
  ObjectiveSchedule s;
  s.c = c;
  s.Z = Z;
  s.k = k ? *k : schedule_length(n, d);
  if (s.k < 0) throw Error("build_schedule: negative segment count");
  s.objectives.push_back(Z);
  if (s.k > 0) {
    for (int i = 0; i <= s.k; ++i) s.objectives.push_back(std::ldexp(1.0, -i) * Z + c);
  }
  s.objectives.push_back(c);
  return s;
}

std::size_t ScheduleReport::segment_total() const {
  std::size_t s = 0;
  for (std::size_t v : segment_sizes) s += v;
  return s;
}

std::size_t ScheduleReport::hermit_total() const {
  std::size_t s = 0;
  for (std::size_t v : segment_hermits) s += v;
  return s;
}

namespace {

Basis finished_basis(ShadowRun& run) {
  if (auto* f = std::get_if<Finished>(&run.outcome)) return std::move(f->basis);
  throw Error("run_schedule: segment ended on an unbounded edge");
}

}  // namespace

ScheduleReport run_schedule(ConstraintView sys, const ObjectiveSchedule& schedule, const Basis& z_basis, double rho,
                            std::size_t pivot_limit) {
  const ProjectionFrame frame = make_frame(schedule.c, schedule.Z);
  ScheduleReport report;

  ShadowRun full = run_shadow_path(sys, schedule.Z, schedule.c, z_basis, pivot_limit);
  finished_basis(full);
  report.full_size = full.path.size();
  report.full_hermits = count_hermits(full.path, frame, rho);

  Basis current = z_basis;
  for (std::size_t i = 0; i + 1 < schedule.objectives.size(); ++i) {
    ShadowRun seg = run_shadow_path(sys, schedule.objectives[i], schedule.objectives[i + 1], std::move(current),
                                    pivot_limit);
    current = finished_basis(seg);
    report.segment_sizes.push_back(seg.path.size());
    report.segment_hermits.push_back(count_hermits(seg.path, frame, rho));
  }
  report.junctions = report.segment_sizes.empty() ? 0 : report.segment_sizes.size() - 1;
  return report;
}

}  // namespace shadowlp
