#pragma once

#include <optional>
#include <vector>

#include "shadowlp/oracle.hpp"
#include "shadowlp/random.hpp"
#include "shadowlp/shadow_vertex.hpp"

namespace shadowlp {

struct MarginResult {
  double margin = 0.0;
  double lambda = 0.0;  // witness
};

/// max over lambda in [0, 1] of the smallest coordinate of A_I^{-T}((1 - lambda) c + lambda c2).
/// Evaluated exactly at 0, 1 and the pairwise crossings of the affine coordinates.
MarginResult multiplier_margin(const Basis& basis, const Vector& c, const Vector& c2);

/// min over nonbasic j of (b_j - a_j^T x_I) / ||x_I||. Throws ZeroVertex when ||x_I|| < 1e-12.
double relative_slack(ConstraintView sys, const Basis& basis);

/// ln(1/0.99) / (2d).
double margin_threshold(int d);
/// sigma / (5000 d^{3/2} ln(n)^{3/2}).
double slack_threshold(double sigma, int n, int d);

struct BasisRecord {
  std::vector<int> basis;
  double margin = 0.0;
  double margin_lambda = 0.0;
  std::optional<double> slack;  // empty for a vertex at the origin
  double projected_norm = 0.0;
  std::optional<double> prev_distance;  // projected distance to the path neighbours,
  std::optional<double> next_distance;  // relative to projected_norm
  bool in_M = false;
  bool in_G = false;
  bool in_S = false;  // M and G
  bool in_T = false;  // in S with both path neighbours in S
  bool in_H = false;
};

struct PathReport {
  std::vector<BasisRecord> records;
  double m = 0.0;
  double g = 0.0;
  double rho = 0.0;
  std::size_t count_M = 0;
  std::size_t count_G = 0;
  std::size_t count_S = 0;
  std::size_t count_T = 0;
  std::size_t count_H = 0;
  double min_projected_norm = 0.0;
  double max_projected_norm = 0.0;
};

/// Classifies every basis of a recorded path. Projections use `frame` when
/// given, otherwise the frame of the path's two objectives.
PathReport classify_path(ConstraintView sys, const ShadowPath& path, double m, double g, double rho,
                         const std::optional<ProjectionFrame>& frame = std::nullopt);

/// Size of H(rho) on a path, projected with `frame`. A single-basis path counts as one hermit.
std::size_t count_hermits(const ShadowPath& path, const ProjectionFrame& frame, double rho);

/// Members of T^S for membership flags along a path (a single component).
std::size_t count_triples(const std::vector<bool>& in_S);

/// 3|S| <= 2k + |T^S| + 2|V| on a path with k components.
bool triples_inequality_holds(const std::vector<bool>& in_S, std::size_t components = 1);

/// Integral of 1/||x|| over the part of the polygon boundary inside the
/// annulus r <= ||x|| <= R. Open chains include their two recession rays.
double boundary_integral(const ShadowPolygon& polygon, double R, double r);
/// Same for a closed polygon given by its vertices.
double boundary_integral(const std::vector<Eigen::Vector2d>& closed_polygon, double R, double r);
/// Integral of 1/||p + t v|| dt over t in [t0, t1] for unit v, clipped to the annulus.
double segment_integral(const Eigen::Vector2d& p, const Eigen::Vector2d& v, double t0, double t1, double R,
                        double r);

/// Turning angle at each vertex of a counterclockwise convex polygon.
/// Throws NonConvexInput when an angle falls outside (0, pi) or fewer than 3 vertices are given.
std::vector<double> exterior_angles(const std::vector<Eigen::Vector2d>& polygon);

struct ConeTrialResult {
  std::size_t trials = 0;
  std::size_t hits0 = 0;
  std::size_t hits_m = 0;
  double p0 = 0.0;
  double pm = 0.0;
  /// Standard error of the per-trial difference 1[hit m] - 0.99 * 1[hit 0].
  double stderr_diff = 0.0;
};

/// Monte Carlo estimate of the chance that [c + Z, c2 + Z] meets the cones
/// {x : B^{-1} x >= 0} and {x : B^{-1} x >= m}, with Z from exp_ball_sample.
ConeTrialResult segment_cone_trial(RngStream& rng, const Matrix& B, const Vector& c, const Vector& c2, double m,
                                   std::size_t trials);

/// Objectives Z, Z + c, Z + 2c, ..., Z + 2^k c, then c.
///
/// Z + 2^i c is stored as the parallel direction 2^{-i} Z + c so large k
/// cannot overflow.
struct ObjectiveSchedule {
  Vector c;
  Vector Z;
  int k = 0;
  std::vector<Vector> objectives;
};

/// 5d * ceil(log2(n t)) with t = 2 e d ln n.
int schedule_length(int n, int d);
/// Auto-sized unless `k` is given. k = 0 gives the plain pair (Z, c).
ObjectiveSchedule build_schedule(const Vector& c, const Vector& Z, int n, int d, std::optional<int> k = std::nullopt);

struct ScheduleReport {
  std::vector<std::size_t> segment_sizes;
  std::vector<std::size_t> segment_hermits;
  std::size_t full_size = 0;
  std::size_t full_hermits = 0;
  std::size_t junctions = 0;
  std::size_t segment_total() const;
  std::size_t hermit_total() const;
  /// Sum of segment sizes <= full size + 2 * junctions.
  bool paths_compose() const { return segment_total() <= full_size + 2 * junctions; }
  /// Same slack for the hermit sets.
  bool hermits_compose() const { return hermit_total() <= full_hermits + 2 * junctions; }
};

/// Walks the schedule segment by segment from `z_basis` (optimal for Z) and
/// also walks the single path from Z to c.
ScheduleReport run_schedule(ConstraintView sys, const ObjectiveSchedule& schedule, const Basis& z_basis, double rho,
                            std::size_t pivot_limit = kDefaultPivotLimit);

}  // namespace shadowlp
