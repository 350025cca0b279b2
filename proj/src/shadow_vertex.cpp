#include "shadowlp/shadow_vertex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace shadowlp {

int Basis::position_of(int row) const {
  const auto it = std::lower_bound(indices.begin(), indices.end(), row);
  if (it == indices.end() || *it != row) return -1;
  return static_cast<int>(it - indices.begin());
}

Basis make_basis(ConstraintView sys, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw SingularError("make_basis: repeated row index");
  }
  if (static_cast<int>(indices.size()) != sys.dim()) {
    throw SingularError("make_basis: basis has " + std::to_string(indices.size()) + " rows, need " +
                        std::to_string(sys.dim()));
  }
  BasisFactorization f(select_rows(sys.A, indices));
  Vector x = f.solve(select_entries(sys.b, indices));
  return Basis{std::move(indices), std::move(f), std::move(x)};
}

Vector multipliers(const Basis& basis, const Vector& y) { return basis.factorization.solve_transpose(y); }

LambdaStep max_lambda(const Basis& basis, const Vector& y, const Vector& y2, double lambda_lo) {
  const Vector mu0 = multipliers(basis, y);
  const Vector mu1 = multipliers(basis, y2);
  const Vector mu_lo = (1.0 - lambda_lo) * mu0 + lambda_lo * mu1;

  LambdaStep best;
  best.lambda = 1.0;
  for (Eigen::Index k = 0; k < mu_lo.size(); ++k) {
    // Only coordinates that end negative at lambda = 1 can cross zero.
    if (!(mu1(k) < 0.0 && mu1(k) < mu_lo(k))) continue;
    const double start = std::max(mu_lo(k), 0.0);
    const double root = lambda_lo + (1.0 - lambda_lo) * start / (start - mu1(k));
    if (root < best.lambda) {
      best.lambda = root;
      best.leaving = basis.indices[static_cast<std::size_t>(k)];
    }
  }
  if (!best.leaving) best.lambda = 1.0;
  return best;
}

RatioStep ratio_test(ConstraintView sys, const Basis& basis, int leaving) {
  const int pos = basis.position_of(leaving);
  if (pos < 0) throw Error("ratio_test: row " + std::to_string(leaving) + " is not in the basis");
  Vector unit = Vector::Zero(sys.dim());
  unit(pos) = 1.0;
  RatioStep out;
  out.direction = basis.factorization.solve(unit);
  const Vector aw = sys.A * out.direction;
  const Vector ax = sys.A * basis.x;
  for (int i = 0; i < sys.rows(); ++i) {
    if (basis.contains(i)) continue;
    if (!(aw(i) < -tol::kDirection)) continue;
    const double s = (sys.b(i) - ax(i)) / (-aw(i));
    if (s < out.step) {
      out.step = s;
      out.entering = i;
    }
  }
  if (out.entering && out.step < -tol::kNegativeStep) {
    throw NegativeStep("ratio_test: step " + std::to_string(out.step) + " at row " +
                       std::to_string(*out.entering));
  }
  if (out.entering && out.step < 0.0) out.step = 0.0;
  return out;
}

PivotOutcome pivot_step(ConstraintView sys, const Basis& basis, const Vector& y, const Vector& y2,
                        double lambda_lo) {
  const LambdaStep ls = max_lambda(basis, y, y2, lambda_lo);
  if (!ls.leaving) return Finished{basis};
  const RatioStep rs = ratio_test(sys, basis, *ls.leaving);
  if (!rs.entering) return UnboundedRay{basis, ls.lambda, *ls.leaving, -rs.direction};
  std::vector<int> next = basis.indices;
  next[static_cast<std::size_t>(basis.position_of(*ls.leaving))] = *rs.entering;
  return Advanced{make_basis(sys, std::move(next)), ls.lambda, *ls.leaving, *rs.entering};
}

ShadowRun run_shadow_path(ConstraintView sys, const Vector& y, const Vector& y2, Basis start,
                          std::size_t limit, const StopPredicate& stop) {
  const double ny = y.norm();
  const double ny2 = y2.norm();
  if (!(ny > 0.0) || !(ny2 > 0.0)) throw Error("run_shadow_path: zero objective");
  const Vector u = y / ny;
  const Vector u2 = y2 / ny2;

  ShadowPath path;
  path.start_objective = y;
  path.end_objective = y2;
  path.bases.push_back(std::move(start));
  path.lambdas.push_back(0.0);

  std::set<std::vector<int>> visited{path.bases.front().indices};
  double lambda = 0.0;
  int stalls = 0;
  for (;;) {
    PivotOutcome step = pivot_step(sys, path.bases.back(), u, u2, lambda);
    if (stop && stop(path.bases.back(), step)) return ShadowRun{std::move(path), std::move(step), true};
    if (auto* adv = std::get_if<Advanced>(&step)) {
      if (path.pivots() >= limit) {
        throw PivotLimitExceeded("run_shadow_path: pivot limit " + std::to_string(limit) + " reached");
      }
      if (adv->lambda - lambda < tol::kLambdaProgress) {
        if (++stalls >= 2) throw NumericalStall("run_shadow_path: lambda stalled at " + std::to_string(lambda));
      } else {
        stalls = 0;
      }
      lambda = std::max(lambda, adv->lambda);
      if (!visited.insert(adv->basis.indices).second) {
        throw CycleDetected("run_shadow_path: basis revisited after " + std::to_string(path.pivots()) +
                            " pivots");
      }
      path.bases.push_back(std::move(adv->basis));
      path.lambdas.push_back(lambda);
      continue;
    }
    return ShadowRun{std::move(path), std::move(step)};
  }
}

double max_violation(ConstraintView sys, const Vector& x) {
  if (sys.rows() == 0) return 0.0;
  return std::max(0.0, (sys.A * x - sys.b).maxCoeff());
}

}  // namespace shadowlp
