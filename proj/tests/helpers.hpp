#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "shadowlp/lp.hpp"
#include "shadowlp/oracle.hpp"
#include "shadowlp/random.hpp"

namespace shadowlp::testing {

/// -1 <= x_i <= 1, objective all ones.
inline LpInstance box(int d) {
  LpInstance lp;
  lp.A = Matrix::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    lp.A(2 * i, i) = 1.0;
    lp.A(2 * i + 1, i) = -1.0;
  }
  lp.b = Vector::Ones(2 * d);
  lp.c = Vector::Ones(d);
  return lp;
}

/// Rows uniform on the sphere of radius 1/sqrt(2) with rhs 1/sqrt(2), perturbed
/// by sigma, Gaussian objective.
inline SmoothedInstance smoothed_ball(RngStream& rng, int n, int d, double sigma) {
  const double h = 1.0 / std::sqrt(2.0);
  Matrix abar(n, d);
  for (int i = 0; i < n; ++i) abar.row(i) = h * uniform_sphere(rng, d).transpose();
  const Vector bbar = Vector::Constant(n, h);
  const Vector c = gaussian_vector(rng, Vector::Zero(d), 1.0);
  return smoothed_instance(rng, abar, bbar, c, sigma, true);
}

/// Feasible with no unbounded edge at any feasible vertex.
inline bool is_bounded(const LpInstance& lp) {
  const ConstraintView sys{lp.A, lp.b};
  const auto bases = enumerate_feasible_bases(sys);
  return !bases.empty() && unbounded_edges(sys, bases).empty();
}

/// Draws until a bounded instance turns up.
inline SmoothedInstance bounded_smoothed_ball(RngStream& rng, int n, int d, double sigma) {
  for (;;) {
    SmoothedInstance inst = smoothed_ball(rng, n, d, sigma);
    if (is_bounded(inst.lp)) return inst;
  }
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace shadowlp::testing
