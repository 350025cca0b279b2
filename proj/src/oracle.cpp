#include "shadowlp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <fmt/format.h>

namespace shadowlp {

double binomial(int n, int d) {
  if (d < 0 || d > n) return 0.0;
  double out = 1.0;
  for (int k = 1; k <= d; ++k) out = out * (n - d + k) / k;
  return std::round(out);
}

std::vector<Basis> enumerate_feasible_bases(ConstraintView sys) {
  const int n = sys.rows();
  const int d = sys.dim();
  if (binomial(n, d) > kEnumerationGuard) {
    throw TooLarge(fmt::format("enumerate_feasible_bases: binom({}, {}) exceeds guard", n, d));
  }
  std::vector<Basis> out;
  if (d > n || d == 0) return out;
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) idx[static_cast<std::size_t>(k)] = k;
  for (;;) {
    try {
      Basis basis = make_basis(sys, idx);
      if ((sys.A * basis.x - sys.b).maxCoeff() <= kOracleFeasibility) out.push_back(std::move(basis));
    } catch (const SingularError&) {
    }
    int k = d - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - d + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<Vector> unbounded_edges(ConstraintView sys, const std::vector<Basis>& bases) {
  std::vector<Vector> out;
  const int d = sys.dim();
  for (const Basis& basis : bases) {
    for (int pos = 0; pos < d; ++pos) {
      Vector unit = Vector::Zero(d);
      unit(pos) = 1.0;
      Vector r = -basis.factorization.solve(unit);
      r.normalize();
      if ((sys.A * r).maxCoeff() <= kOracleFeasibility) out.push_back(std::move(r));
    }
  }
  return out;
}

OracleOptimum lp_optimum_oracle(ConstraintView sys, const Vector& objective) {
  const std::vector<Basis> bases = enumerate_feasible_bases(sys);
  OracleOptimum out;
  if (bases.empty()) return out;
  const double scale = std::max(objective.norm(), 1e-300);
  for (Vector& r : unbounded_edges(sys, bases)) {
    if (objective.dot(r) > 1e-12 * scale) {
      out.status = OracleStatus::kUnbounded;
      out.ray = std::move(r);
      return out;
    }
  }
  out.status = OracleStatus::kOptimal;
  out.value = -std::numeric_limits<double>::infinity();
  for (const Basis& basis : bases) {
    const double v = objective.dot(basis.x);
    if (v > out.value) {
      out.value = v;
      out.point = basis.x;
      out.basis = basis.indices;
    }
  }
  return out;
}

ProjectionFrame make_frame(const Vector& c, const Vector& z) {
  ProjectionFrame f;
  f.u1 = c.normalized();
  f.u2 = z - z.dot(f.u1) * f.u1;
  const double n2 = f.u2.norm();
  if (!(n2 > 1e-14 * std::max(z.norm(), 1e-300))) throw Error("make_frame: objectives are parallel");
  f.u2 /= n2;
  return f;
}

std::vector<Eigen::Vector2d> ShadowPolygon::points() const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.point);
  return out;
}

std::vector<std::size_t> convex_hull(const std::vector<Eigen::Vector2d>& pts, double collinear_tol) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    if (pts[a].y() != pts[b].y()) return pts[a].y() < pts[b].y();
    return a < b;
  });
  if (order.size() <= 1) return order;
  double extent = 0.0;
  for (const auto& p : pts) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const double eps = collinear_tol * std::max(1.0, extent * extent);
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    const Eigen::Vector2d oa = pts[a] - pts[o];
    const Eigen::Vector2d ob = pts[b] - pts[o];
    return oa.x() * ob.y() - oa.y() * ob.x();
  };
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= eps) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= eps) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  if (hull.size() == 1 || (hull.size() == 2 && (pts[hull[0]] - pts[hull[1]]).norm() == 0.0)) hull.resize(1);
  return hull;
}

ShadowPolygon shadow_polygon_oracle(ConstraintView sys, const Vector& c, const Vector& z) {
  const std::vector<Basis> bases = enumerate_feasible_bases(sys);
  ShadowPolygon poly;
  poly.frame = make_frame(c, z);
  if (bases.empty()) return poly;

  std::vector<Eigen::Vector2d> pts;
  for (const Basis& b : bases) pts.push_back(poly.frame.project(b.x));
  const std::size_t real_count = pts.size();

  double extent = 1.0;
  for (const auto& p : pts) extent = std::max(extent, p.norm());
  for (const Vector& r : unbounded_edges(sys, bases)) {
    const Eigen::Vector2d rp = poly.frame.project(r);
    if (rp.norm() < 1e-12) continue;
    poly.bounded = false;
  }
  if (!poly.bounded) {
    // Stand-in far points along each projected recession direction.
    const double far = 1e6 * extent;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const int d = sys.dim();
      for (int pos = 0; pos < d; ++pos) {
        Vector unit = Vector::Zero(d);
        unit(pos) = 1.0;
        Vector r = -bases[i].factorization.solve(unit);
        r.normalize();
        if ((sys.A * r).maxCoeff() > kOracleFeasibility) continue;
        const Eigen::Vector2d rp = poly.frame.project(r);
        if (rp.norm() < 1e-12) continue;
        pts.push_back(pts[i] + far * rp.normalized());
      }
    }
  }

  std::vector<std::size_t> hull = convex_hull(pts);
  if (!poly.bounded) {
    // Rotate so the chain starts right after the block of far points.
    const auto is_far = [&](std::size_t h) { return h >= real_count; };
    std::size_t start = 0;
    for (std::size_t k = 0; k < hull.size(); ++k) {
      if (is_far(hull[k]) && !is_far(hull[(k + 1) % hull.size()])) start = (k + 1) % hull.size();
    }
    std::vector<std::size_t> chain;
    for (std::size_t k = 0; k < hull.size(); ++k) {
      const std::size_t h = hull[(start + k) % hull.size()];
      if (is_far(h)) break;
      chain.push_back(h);
    }
    const std::size_t before = hull[(start + hull.size() - 1) % hull.size()];
    const std::size_t after = hull[(start + chain.size()) % hull.size()];
    if (!chain.empty()) {
      poly.ray_first = (pts[before] - pts[chain.front()]).normalized();
      poly.ray_last = (pts[after] - pts[chain.back()]).normalized();
    }
    hull = std::move(chain);
  }

  for (std::size_t h : hull) {
    for (std::size_t j = 0; j < real_count; ++j) {
      // Several bases of one degenerate vertex share a pre-image; only distinct points clash.
      if (j != h && (pts[j] - pts[h]).norm() <= 1e-9 && (bases[j].x - bases[h].x).norm() > 1e-9) {
        throw DegenerateShadow(fmt::format("shadow polygon vertex has several pre-images (bases {} and {})",
                                           fmt::join(bases[h].indices, ","), fmt::join(bases[j].indices, ",")));
      }
    }
    poly.vertices.push_back(HullVertex{pts[h], bases[h].indices, bases[h].x});
  }
  return poly;
}

std::vector<std::vector<int>> shadow_arc(const ShadowPolygon& polygon, const Vector& c, const Vector& z) {
  std::vector<std::vector<int>> out;
  const auto& vs = polygon.vertices;
  if (vs.empty()) return out;
  const Eigen::Vector2d cp = polygon.frame.project(c);
  const Eigen::Vector2d zp = polygon.frame.project(z);
  auto argmax = [&](const Eigen::Vector2d& dir) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < vs.size(); ++k)
      if (dir.dot(vs[k].point) > dir.dot(vs[best].point)) best = k;
    return best;
  };
  const std::size_t from = argmax(cp);
  const std::size_t to = argmax(zp);
  if (!polygon.bounded && to < from) throw Error("shadow_arc: arc leaves the open chain");
  for (std::size_t k = from;; k = (k + 1) % vs.size()) {
    out.push_back(vs[k].basis);
    if (k == to) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vertex graph
// ---------------------------------------------------------------------------

std::size_t VertexGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adjacency) twice += a.size();
  return twice / 2;
}

int VertexGraph::find(const std::vector<int>& basis_indices) const {
  for (std::size_t k = 0; k < vertices.size(); ++k)
    if (vertices[k].indices == basis_indices) return static_cast<int>(k);
  return -1;
}

namespace {

std::optional<std::vector<int>> pivot_neighbor(ConstraintView sys, const Basis& basis, int leaving) {
  const RatioStep rs = ratio_test(sys, basis, leaving);
  if (!rs.entering) return std::nullopt;
  std::vector<int> next = basis.indices;
  next[static_cast<std::size_t>(basis.position_of(leaving))] = *rs.entering;
  std::sort(next.begin(), next.end());
  return next;
}

void finalize(VertexGraph& g) {
  for (auto& a : g.adjacency) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

}  // namespace

VertexGraph discover_vertex_graph(ConstraintView sys, const Basis& start, std::size_t guard) {
  VertexGraph g;
  std::map<std::vector<int>, int> ids;
  std::deque<int> queue;
  auto add = [&](Basis b) {
    const int id = static_cast<int>(g.vertices.size());
    ids.emplace(b.indices, id);
    g.vertices.push_back(std::move(b));
    g.adjacency.emplace_back();
    queue.push_back(id);
    if (g.vertices.size() > guard) throw TooLarge(fmt::format("discover_vertex_graph: more than {} vertices", guard));
    return id;
  };
  add(start);
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const std::vector<int> indices = g.vertices[static_cast<std::size_t>(id)].indices;
    for (int row : indices) {
      const auto next = pivot_neighbor(sys, g.vertices[static_cast<std::size_t>(id)], row);
      if (!next) continue;
      int other;
      if (auto it = ids.find(*next); it != ids.end()) {
        other = it->second;
      } else {
        try {
          other = add(make_basis(sys, *next));
        } catch (const SingularError&) {
          continue;
        }
      }
      g.adjacency[static_cast<std::size_t>(id)].push_back(other);
      g.adjacency[static_cast<std::size_t>(other)].push_back(id);
    }
  }
  finalize(g);
  return g;
}

VertexGraph build_vertex_graph(ConstraintView sys) {
  VertexGraph g;
  g.vertices = enumerate_feasible_bases(sys);
  g.adjacency.resize(g.vertices.size());
  std::map<std::vector<int>, int> ids;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) ids.emplace(g.vertices[k].indices, static_cast<int>(k));
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    for (int row : g.vertices[k].indices) {
      const auto next = pivot_neighbor(sys, g.vertices[k], row);
      if (!next) continue;
      const auto it = ids.find(*next);
      if (it == ids.end()) continue;
      g.adjacency[k].push_back(it->second);
      g.adjacency[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(k));
    }
  }
  finalize(g);
  return g;
}

int bfs_distance(const VertexGraph& graph, int from, int to) {
  const int n = static_cast<int>(graph.size());
  if (from < 0 || to < 0 || from >= n || to >= n) throw Unreachable("bfs_distance: vertex id out of range");
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) return dist[static_cast<std::size_t>(v)];
    for (int w : graph.adjacency[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  throw Unreachable(fmt::format("bfs_distance: vertex {} not reachable from {}", to, from));
}

}  // namespace shadowlp
