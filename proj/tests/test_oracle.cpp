#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "shadowlp/oracle.hpp"
#include "shadowlp/path_analysis.hpp"

using namespace shadowlp;
using shadowlp::testing::box;
using shadowlp::testing::bounded_smoothed_ball;

namespace {

Vector e(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

// x >= 0 and 1^T x <= rhs in d = 3.
LpInstance corner_simplex(double rhs) {
  LpInstance lp;
  lp.A.resize(4, 3);
  lp.A << -1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1;
  lp.b = Vector::Zero(4);
  lp.b(3) = rhs;
  lp.c = Vector::Ones(3);
  return lp;
}

}  // namespace

TEST_CASE("binomial and guard") {
  CHECK(binomial(6, 3) == 20.0);
  CHECK(binomial(5, 0) == 1.0);
  CHECK(binomial(3, 5) == 0.0);
  RngStream rng(51, 0);
  const Matrix A = gaussian_matrix(rng, 200, 6, 1.0);
  const Vector b = Vector::Ones(200);
  CHECK_THROWS_AS(enumerate_feasible_bases({A, b}), TooLarge);
}

TEST_CASE("feasible basis counts") {
  const LpInstance bx = box(3);
  CHECK(enumerate_feasible_bases({bx.A, bx.b}).size() == 8);
  const LpInstance simplex = corner_simplex(1.0);
  CHECK(enumerate_feasible_bases({simplex.A, simplex.b}).size() == 4);
}

TEST_CASE("enumeration agrees with pivot discovery") {
  RngStream rng(52, 0);
  for (int k = 0; k < 10; ++k) {
    const SmoothedInstance inst = bounded_smoothed_ball(rng, 10, 3, 0.05);
    const ConstraintView sys{inst.lp.A, inst.lp.b};
    const auto bases = enumerate_feasible_bases(sys);
    const VertexGraph g = discover_vertex_graph(sys, bases.front());
    CHECK(g.size() == bases.size());
    for (const Basis& b : bases) CHECK(g.find(b.indices) >= 0);
    // Simple bounded 3-polytope: every vertex has degree 3, and E = 3V/2.
    const VertexGraph full = build_vertex_graph(sys);
    for (const auto& adj : full.adjacency) CHECK(adj.size() == 3);
    CHECK(full.edge_count() == 3 * full.size() / 2);
  }
}

TEST_CASE("lp_optimum_oracle") {
  SUBCASE("box") {
    const LpInstance bx = box(3);
    const OracleOptimum opt = lp_optimum_oracle({bx.A, bx.b}, bx.c);
    REQUIRE(opt.status == OracleStatus::kOptimal);
    CHECK(opt.point.isApprox(Vector::Ones(3)));
    CHECK(opt.value == doctest::Approx(3.0));
  }
  SUBCASE("open wedge") {
    const LpInstance simplex = corner_simplex(1.0);
    // Drop 1^T x <= 1: the orthant x >= 0 is open toward every positive direction.
    const Matrix A = simplex.A.topRows(3);
    const Vector b = Vector::Zero(3);
    const OracleOptimum opt = lp_optimum_oracle({A, b}, Vector::Ones(3));
    REQUIRE(opt.status == OracleStatus::kUnbounded);
    CHECK((A * opt.ray).maxCoeff() <= 1e-9);
    CHECK(opt.ray.sum() > 0.0);
    CHECK(lp_optimum_oracle({A, b}, -Vector::Ones(3)).status == OracleStatus::kOptimal);
  }
  SUBCASE("empty") {
    LpInstance bx = box(3);
    bx.b(0) = -2.0;
    CHECK(lp_optimum_oracle({bx.A, bx.b}, bx.c).status == OracleStatus::kInfeasible);
  }
}

TEST_CASE("shadow polygons of simple shapes") {
  SUBCASE("cube seen along coordinate axes has doubled pre-images") {
    const LpInstance bx = box(3);
    CHECK_THROWS_AS(shadow_polygon_oracle({bx.A, bx.b}, e(3, 0), e(3, 1)), DegenerateShadow);
  }
  SUBCASE("slightly tilted cube projects to a hexagon") {
    const LpInstance bx = box(3);
    Vector c(3), z(3);
    c << 1, 0, 0.2;
    z << 0, 1, 0.3;
    const ShadowPolygon poly = shadow_polygon_oracle({bx.A, bx.b}, c, z);
    CHECK(poly.bounded);
    CHECK(poly.vertices.size() == 6);
    const auto angles = exterior_angles(poly.points());
    double sum = 0.0;
    for (double a : angles) sum += a;
    CHECK(sum == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
  }
  SUBCASE("single-point feasible set") {
    const LpInstance simplex = corner_simplex(0.0);
    const ShadowPolygon poly = shadow_polygon_oracle({simplex.A, simplex.b}, e(3, 0), e(3, 1));
    REQUIRE(poly.vertices.size() == 1);
    CHECK(poly.vertices.front().x.norm() < 1e-12);
  }
  SUBCASE("open orthant gives an open chain") {
    const LpInstance simplex = corner_simplex(1.0);
    const Matrix A = simplex.A.topRows(3);
    const Vector b = Vector::Zero(3);
    Vector c(3), z(3);
    c << -1, -0.2, -0.3;
    z << 0.4, -1, -0.1;
    const ShadowPolygon poly = shadow_polygon_oracle({A, b}, c, z);
    CHECK_FALSE(poly.bounded);
    CHECK(poly.vertices.size() == 1);
  }
}

TEST_CASE("convex hull") {
  std::vector<Eigen::Vector2d> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}};
  const auto h = convex_hull(pts);
  CHECK(h == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("shadow arc matches the pivot engine") {
  RngStream rng(53, 0);
  for (int k = 0; k < 30; ++k) {
    const SmoothedInstance inst = bounded_smoothed_ball(rng, 15, 3, 0.05);
    const ConstraintView sys{inst.lp.A, inst.lp.b};
    const Vector c = gaussian_vector(rng, Vector::Zero(3), 1.0);
    const Vector z = gaussian_vector(rng, Vector::Zero(3), 1.0);
    const ShadowPolygon poly = shadow_polygon_oracle(sys, c, z);
    const auto arc = shadow_arc(poly, c, z);
    const OracleOptimum start = lp_optimum_oracle(sys, c);
    CHECK(arc.front() == start.basis);
    const ShadowRun run = run_shadow_path(sys, c, z, make_basis(sys, start.basis));
    std::vector<std::vector<int>> path;
    for (const Basis& b : run.path.bases) path.push_back(b.indices);
    CHECK(path == arc);

    // Hull vertices are labeled by distinct bases and are strictly convex.
    const auto angles = exterior_angles(poly.points());
    double sum = 0.0;
    for (double a : angles) sum += a;
    CHECK(std::abs(sum - 2 * std::numbers::pi) <= 1e-6);
  }
}

TEST_CASE("bfs distances") {
  const LpInstance bx = box(3);
  const ConstraintView sys{bx.A, bx.b};
  const VertexGraph g = build_vertex_graph(sys);
  REQUIRE(g.size() == 8);
  // Rows 0, 2, 4 are x_i <= 1; rows 1, 3, 5 are -x_i <= 1.
  const int top = g.find({0, 2, 4});
  const int bottom = g.find({1, 3, 5});
  const int side = g.find({1, 2, 4});
  CHECK(bfs_distance(g, top, bottom) == 3);
  CHECK(bfs_distance(g, top, side) == 1);
  CHECK(bfs_distance(g, top, top) == 0);
  CHECK_THROWS_AS(bfs_distance(g, top, 99), Unreachable);

  VertexGraph split = g;
  for (auto& adj : split.adjacency) adj.clear();
  CHECK_THROWS_AS(bfs_distance(split, top, bottom), Unreachable);
}
