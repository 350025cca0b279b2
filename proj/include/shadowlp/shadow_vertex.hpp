#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "shadowlp/linalg.hpp"

namespace shadowlp {

/// Tolerances of the pivot engine. Detection thresholds sit two orders of
/// magnitude below the assertion thresholds used by validators.
namespace tol {
inline constexpr double kOptimality = 1e-9;   // multipliers >= -kOptimality
inline constexpr double kFeasibility = 1e-8;  // A x <= b + kFeasibility
inline constexpr double kDirection = 1e-11;   // a_i^T w < -kDirection blocks
inline constexpr double kLambdaProgress = 1e-12;
inline constexpr double kNegativeStep = 1e-9;
}  // namespace tol

/// Non-owning view of the constraint system A x <= b.
struct ConstraintView {
  const Matrix& A;
  const Vector& b;

  int rows() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }
};

/// A sorted d-subset of constraint rows with invertible submatrix and its basic solution.
struct Basis {
  std::vector<int> indices;
  BasisFactorization factorization;
  Vector x;

  int position_of(int row) const;
  bool contains(int row) const { return position_of(row) >= 0; }
};

/// Builds the basis for `indices` (sorted on return). Throws SingularError.
Basis make_basis(ConstraintView sys, std::vector<int> indices);

/// Multipliers y^T A_I^{-1} of objective y, i.e. the solution of A_I^T mu = y.
Vector multipliers(const Basis& basis, const Vector& y);

struct LambdaStep {
  double lambda = 1.0;
  std::optional<int> leaving;  // constraint row whose multiplier hits zero
};

/// Largest lambda in [lambda_lo, 1] for which the basis stays optimal for
/// (1 - lambda) y + lambda y2. Ties are broken by the smallest row index.
LambdaStep max_lambda(const Basis& basis, const Vector& y, const Vector& y2, double lambda_lo);

struct RatioStep {
  double step = std::numeric_limits<double>::infinity();
  std::optional<int> entering;
  Vector direction;  // w = A_I^{-1} e_j; the edge is x_I - s w
};

/// Ratio test along the edge that releases `leaving`. Throws NegativeStep.
RatioStep ratio_test(ConstraintView sys, const Basis& basis, int leaving);

/// One shadow vertex iteration.
struct Advanced {
  Basis basis;
  double lambda;
  int leaving;
  int entering;
};
struct Finished {
  Basis basis;
};
struct UnboundedRay {
  Basis basis;    // last basis before the unbounded edge
  double lambda;  // breakpoint at which the ray became improving
  int leaving;
  Vector ray;     // A ray <= 0 (up to tolerance), y2^T ray > 0
};
using PivotOutcome = std::variant<Advanced, Finished, UnboundedRay>;

/// Runs one iteration of the shadow vertex rule from `basis`, which must be
/// optimal for the objective at `lambda_lo`.
PivotOutcome pivot_step(ConstraintView sys, const Basis& basis, const Vector& y, const Vector& y2,
                        double lambda_lo);

struct ShadowPath {
  std::vector<Basis> bases;
  std::vector<double> lambdas;  // lambdas[k]: breakpoint where bases[k] became optimal
  Vector start_objective;
  Vector end_objective;

  std::size_t size() const { return bases.size(); }
  std::size_t pivots() const { return bases.empty() ? 0 : bases.size() - 1; }
};

struct ShadowRun {
  ShadowPath path;
  PivotOutcome outcome;  // Finished or UnboundedRay; Advanced only when stopped
  bool stopped = false;  // halted by the caller's predicate before `outcome` was applied
};

/// Called with the current basis and the next step; returning true halts the run.
using StopPredicate = std::function<bool(const Basis& current, const PivotOutcome& next)>;

inline constexpr std::size_t kDefaultPivotLimit = 1'000'000;

/// Follows the shadow vertex path from objective y to y2 starting at `start`,
/// which must be feasible and optimal for y.
///
/// Both objectives are normalized to unit length first; the path depends only
/// on their directions. Recorded lambdas refer to the normalized objectives.
/// Throws PivotLimitExceeded, CycleDetected, NumericalStall, NegativeStep.
ShadowRun run_shadow_path(ConstraintView sys, const Vector& y, const Vector& y2, Basis start,
                          std::size_t limit = kDefaultPivotLimit, const StopPredicate& stop = {});

/// Max violation max_i (a_i^T x - b_i), clipped below at zero.
double max_violation(ConstraintView sys, const Vector& x);

}  // namespace shadowlp
