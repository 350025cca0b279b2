#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "shadowlp/lp.hpp"
#include "shadowlp/shadow_vertex.hpp"

namespace shadowlp {

inline constexpr double kEnumerationGuard = 1e7;
inline constexpr double kOracleFeasibility = 1e-9;

/// Number of d-subsets of n rows, as a double (saturates instead of overflowing).
double binomial(int n, int d);

/// Every basis I with A_I invertible and A x_I <= b + 1e-9, in lexicographic order.
/// Throws TooLarge when binom(n, d) exceeds the enumeration guard.
std::vector<Basis> enumerate_feasible_bases(ConstraintView sys);

enum class OracleStatus { kOptimal, kUnbounded, kInfeasible };

struct OracleOptimum {
  OracleStatus status = OracleStatus::kInfeasible;
  Vector point;                 // maximizer when optimal
  std::vector<int> basis;       // its basis
  double value = 0.0;
  Vector ray;                   // improving unbounded edge when unbounded
};

/// LP optimum by enumeration. Unboundedness is detected through unbounded
/// edges of feasible bases (A r <= 0 along the edge, objective^T r > 0).
OracleOptimum lp_optimum_oracle(ConstraintView sys, const Vector& objective);

/// Unbounded edge directions -A_I^{-1} e_j over all given feasible bases.
std::vector<Vector> unbounded_edges(ConstraintView sys, const std::vector<Basis>& bases);

/// Orthonormal frame (u1, u2) of span(c, z), with u1 parallel to c and z^T u2 > 0.
struct ProjectionFrame {
  Vector u1;
  Vector u2;

  Eigen::Vector2d project(const Vector& x) const { return {u1.dot(x), u2.dot(x)}; }
};
ProjectionFrame make_frame(const Vector& c, const Vector& z);

struct HullVertex {
  Eigen::Vector2d point;
  std::vector<int> basis;
  Vector x;
};

/// Projection of the feasible set onto span(c, z).
///
/// Bounded case: vertices in counterclockwise order, strictly convex.
/// Unbounded case: an open chain, counterclockwise, with the recession rays
/// leaving its first and last vertex.
struct ShadowPolygon {
  ProjectionFrame frame;
  std::vector<HullVertex> vertices;
  bool bounded = true;
  Eigen::Vector2d ray_first{0.0, 0.0};
  Eigen::Vector2d ray_last{0.0, 0.0};

  std::vector<Eigen::Vector2d> points() const;
};

/// Throws TooLarge, DegenerateShadow (a hull point that is the image of two distinct vertices).
ShadowPolygon shadow_polygon_oracle(ConstraintView sys, const Vector& c, const Vector& z);

/// Bases along the counterclockwise hull arc from the c-maximizer to the
/// z-maximizer: the path the shadow vertex rule takes from c to z.
std::vector<std::vector<int>> shadow_arc(const ShadowPolygon& polygon, const Vector& c, const Vector& z);

/// 2-D convex hull, counterclockwise, collinear points dropped. Returns indices into `pts`.
std::vector<std::size_t> convex_hull(const std::vector<Eigen::Vector2d>& pts, double collinear_tol = 1e-12);

// ---------------------------------------------------------------------------
// Vertex graph
// ---------------------------------------------------------------------------

struct VertexGraph {
  std::vector<Basis> vertices;
  std::vector<std::vector<int>> adjacency;  // sorted neighbor ids

  std::size_t size() const { return vertices.size(); }
  std::size_t edge_count() const;
  int find(const std::vector<int>& basis_indices) const;
};

/// 1-skeleton discovered by pivoting outward from `start` along every edge.
/// Throws TooLarge once more than `guard` vertices are found.
VertexGraph discover_vertex_graph(ConstraintView sys, const Basis& start, std::size_t guard = 1'000'000);

/// 1-skeleton over all enumerated feasible bases; adjacency from pivoting.
VertexGraph build_vertex_graph(ConstraintView sys);

/// Shortest path length in edges. Throws Unreachable.
int bfs_distance(const VertexGraph& graph, int from, int to);

}  // namespace shadowlp
