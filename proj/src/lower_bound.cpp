#include "shadowlp/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <fmt/format.h>

#include "shadowlp/errors.hpp"
#include "shadowlp/three_phase.hpp"

namespace shadowlp {

namespace {

bool covered(const std::vector<Vector>& points, const Vector& x, double eta) {
  const double eta2 = eta * eta;
  for (const Vector& p : points)
    if ((p - x).squaredNorm() <= eta2) return true;
  return false;
}

bool too_close(const std::vector<Vector>& points, const Vector& x, double eta) {
  const double eta2 = eta * eta;
  for (const Vector& p : points)
    if ((p - x).squaredNorm() < eta2) return true;
  return false;
}

}  // namespace

DenseSet greedy_dense_set(RngStream& rng, double eta, int d, std::size_t rejection_streak,
                          std::size_t audit_samples) {
  if (!(eta > 0.0 && eta <= 2.0) || d < 2) {
    throw Error(fmt::format("greedy_dense_set: eta = {} and d = {} out of range", eta, d));
  }
  DenseSet out;
  out.eta = eta;
  std::size_t streak = 0;
  while (streak < rejection_streak) {
    Vector x = uniform_sphere(rng, d);
    if (too_close(out.points, x, eta)) {
      ++streak;
    } else {
      out.points.push_back(std::move(x));
      streak = 0;
    }
  }
  if (out.points.empty()) out.points.push_back(uniform_sphere(rng, d));

  for (std::size_t k = 0; k < audit_samples; ++k) {
    const Vector x = uniform_sphere(rng, d);
    if (!covered(out.points, x, eta)) {
      throw AuditFailed(fmt::format("greedy_dense_set: audit point {} has no member within {} ({} members)", k,
                                    eta, out.points.size()));
    }
  }
  out.audited = true;
  out.audit_samples = audit_samples;
  return out;
}

double min_pairwise_distance(const std::vector<Vector>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::min(best, (points[i] - points[j]).norm());
  return best;
}

std::size_t lb_row_count(double sigma, int d) {
  return static_cast<std::size_t>(std::floor(std::pow(4.0 / sigma, d) * (1.0 + 1e-12)));
}

void pad_dense_set(RngStream& rng, DenseSet& dense, std::size_t n) {
  const int d = dense.dim();
  while (dense.points.size() < n) dense.points.push_back(uniform_sphere(rng, d));
}

SmoothedInstance build_lb_instance(RngStream& rng, const DenseSet& dense, double sigma, const Vector& c) {
  const int n = static_cast<int>(dense.points.size());
  const int d = dense.dim();
  SmoothedInstance inst;
  inst.abar.resize(n, d);
  for (int i = 0; i < n; ++i) inst.abar.row(i) = dense.points[static_cast<std::size_t>(i)].transpose();
  inst.bbar = Vector::Ones(n);
  inst.sigma = sigma;
  inst.perturb_b = true;
  inst.noise_A = gaussian_matrix(rng, n, d, sigma);
  inst.noise_b = gaussian_vector(rng, Vector::Zero(n), sigma);
  inst.lp.A = inst.abar + inst.noise_A;
  inst.lp.b = inst.bbar + inst.noise_b;
  inst.lp.c = c;
  return inst;
}

double norm_event_radius(double sigma, int n, int d) {
  return 4.0 * sigma * std::sqrt(d * std::log(static_cast<double>(n)));
}

bool norm_event_holds(const SmoothedInstance& inst, double radius) {
  if (inst.noise_A.rows() > 0 && inst.noise_A.rowwise().norm().maxCoeff() > radius) return false;
  if (inst.noise_b.size() > 0 && inst.noise_b.cwiseAbs().maxCoeff() > radius) return false;
  return true;
}

SandwichResult sandwich_check(const LpInstance& lp, const std::vector<Vector>& vertices, double eta) {
  SandwichResult out;
  out.eta = eta;
  out.in_regime = eta <= 0.125;
  out.inner_radius = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lp.A.rows(); ++i) {
    out.inner_radius = std::min(out.inner_radius, lp.b(i) / lp.A.row(i).norm());
  }
  for (const Vector& v : vertices) out.outer_radius = std::max(out.outer_radius, v.norm());
  out.inner_ok = out.inner_radius >= 1.0 - 2.0 * eta;
  out.outer_ok = out.outer_radius <= 1.0 + 4.0 * eta;
  return out;
}

double polar_facet_diameter(const LpInstance& lp, const std::vector<int>& basis) {
  std::vector<Vector> pts;
  for (int i : basis) {
    if (!(lp.b(i) > 0.0)) throw NonpositiveRhs(fmt::format("polar_facet_diameter: b[{}] = {}", i, lp.b(i)));
    pts.push_back(lp.A.row(i).transpose() / lp.b(i));
  }
  double out = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) out = std::max(out, (pts[i] - pts[j]).norm());
  return out;
}

double rel_diam_bound(int d, double R, double gamma) { return (d - 1) * (2.0 / (R * gamma) - 2.0); }

int extreme_vertex_distance(const VertexGraph& graph, const Vector& c) {
  if (graph.size() == 0) throw Unreachable("extreme_vertex_distance: empty graph");
  int hi = 0;
  int lo = 0;
  for (int k = 1; k < static_cast<int>(graph.size()); ++k) {
    const double v = c.dot(graph.vertices[static_cast<std::size_t>(k)].x);
    if (v > c.dot(graph.vertices[static_cast<std::size_t>(hi)].x)) hi = k;
    if (v < c.dot(graph.vertices[static_cast<std::size_t>(lo)].x)) lo = k;
  }
  return bfs_distance(graph, hi, lo);
}

LowerBoundRecord diameter_experiment(RngStream& rng, int d, double sigma, const Vector& c,
                                     const LowerBoundOptions& options) {
  LowerBoundRecord rec;
  rec.d = d;
  rec.sigma = sigma;
  rec.dense_eta = options.dense_eta.value_or(sigma);
  rec.n = options.n.value_or(lb_row_count(sigma, d));

  RngStream dense_rng = rng.derive(1);
  std::optional<DenseSet> packed;
  rec.rejection_streak = options.rejection_streak;
  for (int attempt = 0; !packed; ++attempt) {
    try {
      packed = greedy_dense_set(dense_rng, rec.dense_eta, d, rec.rejection_streak, options.audit_samples);
    } catch (const AuditFailed&) {
      if (attempt >= options.max_streak_doublings) throw;
      rec.rejection_streak *= 2;
    }
  }
  DenseSet dense = std::move(*packed);
  rec.packing_size = dense.points.size();
  pad_dense_set(dense_rng, dense, rec.n);
  rec.n = dense.points.size();

  RngStream noise_rng = rng.derive(2);
  const SmoothedInstance inst = build_lb_instance(noise_rng, dense, sigma, c);
  const LpInstance& lp = inst.lp;
  rec.eta = norm_event_radius(sigma, static_cast<int>(rec.n), d);
  rec.norm_event = norm_event_holds(inst, rec.eta);
  rec.R_formula = 1.0 + 4.0 * rec.eta;

  RngStream solver_rng = rng.derive(3);
  const SolveReport report = solve(solver_rng, lp);
  const auto* opt = std::get_if<Optimal>(&report.outcome);
  if (!opt) throw Error("diameter_experiment: expected an optimal instance, got " + outcome_name(report.outcome));
  rec.solver_pivots = report.pivots.total();

  const ConstraintView sys{lp.A, lp.b};
  const VertexGraph graph = discover_vertex_graph(sys, make_basis(sys, opt->basis), options.vertex_guard);
  rec.vertices = graph.size();
  rec.edges = graph.edge_count();

  std::vector<Vector> xs;
  xs.reserve(graph.size());
  for (const Basis& b : graph.vertices) xs.push_back(b.x);
  rec.sandwich = sandwich_check(lp, xs, rec.eta);
  rec.R_measured = rec.sandwich.outer_radius;

  rec.facet_precondition = lp.b.minCoeff() > 0.0;
  rec.facet_bound = 8.0 * std::sqrt(rec.eta);
  if (rec.facet_precondition) {
    for (const Basis& b : graph.vertices) rec.gamma = std::max(rec.gamma, polar_facet_diameter(lp, b.indices));
  }

  const int start = graph.find(opt->basis);
  int lo = start;
  for (int k = 0; k < static_cast<int>(graph.size()); ++k)
    if (c.dot(graph.vertices[static_cast<std::size_t>(k)].x) < c.dot(graph.vertices[static_cast<std::size_t>(lo)].x))
      lo = k;
  rec.distance = bfs_distance(graph, start, lo);
  rec.bound = rec.facet_precondition ? rel_diam_bound(d, rec.R_measured, rec.gamma)
                                     : -std::numeric_limits<double>::infinity();
  return rec;
}

}  // namespace shadowlp
