#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shadowlp/lp.hpp"
#include "shadowlp/oracle.hpp"
#include "shadowlp/random.hpp"

namespace shadowlp {

/// Unit vectors pairwise at least `eta` apart, dense in the sphere up to the audit.
struct DenseSet {
  double eta = 0.0;
  std::vector<Vector> points;
  bool audited = false;
  std::size_t audit_samples = 0;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

/// Greedy eta-packing from streamed uniform sphere points, stopped after
/// `rejection_streak` consecutive rejections and then audited with
/// `audit_samples` fresh points. Throws AuditFailed.
DenseSet greedy_dense_set(RngStream& rng, double eta, int d, std::size_t rejection_streak,
                          std::size_t audit_samples);

/// Smallest pairwise distance among the points (infinity for fewer than two).
double min_pairwise_distance(const std::vector<Vector>& points);

/// floor((4 / sigma)^d).
std::size_t lb_row_count(double sigma, int d);

/// Appends uniform sphere points until the set has `n` members. The result is
/// still eta-dense but no longer a packing.
void pad_dense_set(RngStream& rng, DenseSet& dense, std::size_t n);

/// Rows of `dense` with right-hand side 1, both perturbed by N(0, sigma^2).
/// The unperturbed rows (s_i, 1) have norm sqrt(2); no norm check is made.
SmoothedInstance build_lb_instance(RngStream& rng, const DenseSet& dense, double sigma, const Vector& c);

/// 4 sigma sqrt(d ln n).
double norm_event_radius(double sigma, int n, int d);
/// Every noise row of A and every noise entry of b within `radius`.
bool norm_event_holds(const SmoothedInstance& inst, double radius);

struct SandwichResult {
  bool inner_ok = false;
  bool outer_ok = false;
  bool in_regime = false;  // eta <= 1/8
  double inner_radius = 0.0;  // min_i b_i / ||a_i||
  double outer_radius = 0.0;  // max vertex norm
  double eta = 0.0;
};

/// inner: min_i b_i / ||a_i|| >= 1 - 2 eta. outer: every vertex norm <= 1 + 4 eta.
SandwichResult sandwich_check(const LpInstance& lp, const std::vector<Vector>& vertices, double eta);

/// Largest pairwise distance among a_i / b_i over the basis rows. Throws NonpositiveRhs.
double polar_facet_diameter(const LpInstance& lp, const std::vector<int>& basis);

/// (d - 1)(2 / (R gamma) - 2).
double rel_diam_bound(int d, double R, double gamma);

struct LowerBoundOptions {
  std::size_t rejection_streak = 20000;  // doubled after each failed audit
  int max_streak_doublings = 8;
  std::size_t audit_samples = 100000;
  std::size_t vertex_guard = 1'000'000;
  std::optional<std::size_t> n;  // floor((4/sigma)^d) when unset
  std::optional<double> dense_eta;  // sigma when unset
};

struct LowerBoundRecord {
  int d = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  double dense_eta = 0.0;
  std::size_t packing_size = 0;
  std::size_t rejection_streak = 0;  // streak of the accepted packing
  double eta = 0.0;  // norm-event radius
  bool norm_event = false;
  SandwichResult sandwich;
  bool facet_precondition = false;  // all vertex bases have positive right-hand sides
  double gamma = 0.0;               // max polar facet diameter
  double facet_bound = 0.0;         // 8 sqrt(eta)
  double R_measured = 0.0;
  double R_formula = 0.0;  // 1 + 4 eta
  std::size_t vertices = 0;
  std::size_t edges = 0;
  int distance = 0;
  double bound = 0.0;
  std::size_t solver_pivots = 0;
  std::string error;  // set by callers that record a failed run instead of throwing

  bool sandwich_ok() const { return !norm_event || (sandwich.inner_ok && sandwich.outer_ok); }
  bool facet_ok() const { return !facet_precondition || gamma <= facet_bound; }
  bool distance_ok() const { return distance >= bound; }
};

/// Builds the instance, finds the c-maximizer with the solver, discovers the
/// vertex graph and measures the distance to the c-minimizer.
LowerBoundRecord diameter_experiment(RngStream& rng, int d, double sigma, const Vector& c,
                                     const LowerBoundOptions& options = {});

/// Distance between the maximizer and minimizer of c on a discovered graph.
int extreme_vertex_distance(const VertexGraph& graph, const Vector& c);

}  // namespace shadowlp
