#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shadowlp/lp.hpp"
#include "shadowlp/random.hpp"
#include "shadowlp/shadow_vertex.hpp"

namespace shadowlp {

// ---------------------------------------------------------------------------
// Phase 1: unit LP  max Z^T x  s.t.  A x <= 1, with d artificial rows.
// ---------------------------------------------------------------------------

/// The unit LP with artificial rows (R s_i)^T x <= 1 appended after the n
/// original rows. The artificial rows form the starting basis, optimal for
/// the fixed objective R e_d.
struct UnitLpPrime {
  Matrix A;                // (n + d) x d
  Vector rhs;              // all ones
  Matrix rotation;         // R
  Matrix s_bar;            // d x d, unperturbed caps (rows)
  Matrix s;                // d x d, perturbed caps (rows)
  Vector fixed_objective;  // R e_d
  Vector Z;                // random objective, standard Gaussian
  int original_rows = 0;
  std::vector<int> start_indices;  // n .. n + d - 1

  ConstraintView view() const { return {A, rhs}; }
};

/// Radius of the cap simplex around 3 e_d: 1 / (10 sqrt(ln d)).
double cap_radius(int d);
/// Rows 3 e_d + r u_i where u_1..u_d are the vertices of a regular simplex
/// with unit circumradius, centered at the origin of the hyperplane e_d^perp.
Matrix cap_simplex(int d);

/// Throws DimensionTooSmall for d < 3.
UnitLpPrime build_unit_lp_prime(RngStream& rng, const Matrix& A, double sigma);

struct StartingBasisCheck {
  bool factorizable = false;
  bool feasible = false;
  bool optimal = false;
  std::optional<Basis> basis;

  bool ok() const { return factorizable && feasible && optimal; }
};
/// Feasibility of (RS)^{-1} 1 and optimality of R e_d for the artificial basis.
StartingBasisCheck check_starting_basis(const UnitLpPrime& lp);

/// Noise level for the artificial rows: min(1 / (4 sqrt(d ln n)), inradius / 4),
/// where inradius = cap_radius(d) / (d - 1) is that of the cap simplex.
double default_artificial_sigma(int n, int d);

struct UnitOptimum {
  Basis basis;  // rows of A only, basic solution of A_I x = 1
  Vector Z;
  int restarts = 0;
  std::size_t pivots = 0;
};
struct Phase1Ray {
  Vector ray;  // A ray <= 0, Z^T ray > 0
  Vector Z;
  int restarts = 0;
  std::size_t pivots = 0;
};
using Phase1Outcome = std::variant<UnitOptimum, Phase1Ray>;

/// Solves the unit LP for a fresh random objective, rebuilding the artificial
/// rows until the optimum uses original rows only.
/// Throws RestartLimitExceeded after `max_restarts` failed attempts.
Phase1Outcome phase1_solve(RngStream& rng, const Matrix& A, int max_restarts, double artificial_sigma,
                           std::size_t pivot_limit = kDefaultPivotLimit);

// ---------------------------------------------------------------------------
// Phase 2: interpolation LP  A x + (1 - b) t <= 1.
// ---------------------------------------------------------------------------

struct InterpolationLp {
  Matrix A;  // n x (d + 1): [A | 1 - b]
  Vector rhs;
  Vector lifted_objective;  // (Z, Z_{d+1})

  ConstraintView view() const { return {A, rhs}; }
};

InterpolationLp build_interpolation_lp(const Matrix& A, const Vector& b, const Vector& Z, double z_extra);

struct InputBasis {
  Basis basis;  // basis of A x <= b optimal for Z
  std::size_t pivots = 0;
};
struct FarkasCertificate {
  Vector y;  // y >= 0, y^T A = 0, y^T b < 0, normalized to ||y||_1 = 1
  double max_t = 0.0;
  std::size_t pivots = 0;
};
struct Phase2Ray {
  Vector ray;
  std::size_t pivots = 0;
};
using Phase2Outcome = std::variant<InputBasis, FarkasCertificate, Phase2Ray>;

/// Lifts the unit-LP optimum into the interpolation LP and follows the shadow
/// path toward max t until an edge crosses t = 1. Draws Z_{d+1} from `rng`.
/// Throws CertificateInvalid when the infeasibility certificate fails to verify.
Phase2Outcome phase2_solve(RngStream& rng, const Matrix& A, const Vector& b, const Basis& unit_basis,
                           const Vector& Z, std::size_t pivot_limit = kDefaultPivotLimit);

// ---------------------------------------------------------------------------
// Phase 3 and the full solver.
// ---------------------------------------------------------------------------

struct Optimal {
  std::vector<int> basis;
  Vector x;
  double objective = 0.0;
};
struct Unbounded {
  Vector ray;  // A ray <= 0, c^T ray > 0, unit length
};
struct Infeasible {
  Vector y;  // Farkas certificate
};
using SolveOutcome = std::variant<Optimal, Unbounded, Infeasible>;

std::string outcome_name(const SolveOutcome& outcome);

struct Phase3Result {
  SolveOutcome outcome;
  ShadowPath path;
};
/// Follows the shadow path from Z to c on the input LP.
Phase3Result phase3_solve(const LpInstance& lp, Basis z_basis, const Vector& Z,
                          std::size_t pivot_limit = kDefaultPivotLimit);

struct PhaseCounts {
  std::size_t phase1 = 0;
  std::size_t phase2 = 0;
  std::size_t phase3 = 0;
  std::size_t total() const { return phase1 + phase2 + phase3; }
};

struct SolverOptions {
  int max_restarts = 64;
  std::optional<double> artificial_sigma;  // default_artificial_sigma when unset
  std::size_t pivot_limit = kDefaultPivotLimit;
};

struct SolveReport {
  SolveOutcome outcome;
  PhaseCounts pivots;
  int restarts = 0;  // failed phase-1 attempts
  Vector Z;
  std::optional<Basis> z_basis;          // input-LP basis optimal for Z
  std::optional<ShadowPath> phase3_path;  // Z -> c
};

/// Three-phase shadow vertex solve. Certificates are re-verified before returning.
SolveReport solve(RngStream& rng, const LpInstance& lp, const SolverOptions& options = {});

struct CertificateCheck {
  bool ok = false;
  std::string detail;
};
/// Checks the outcome against its own invariant, independent of solver state.
CertificateCheck verify_outcome(const LpInstance& lp, const SolveOutcome& outcome);

}  // namespace shadowlp
