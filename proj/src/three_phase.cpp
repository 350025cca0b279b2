#include "shadowlp/three_phase.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace shadowlp {
namespace {

Vector unit_vector(int d, int k) {
  Vector e = Vector::Zero(d);
  e(k) = 1.0;
  return e;
}

std::vector<int> drop_row(const std::vector<int>& indices, int row) {
  std::vector<int> out;
  out.reserve(indices.size() - 1);
  for (int i : indices)
    if (i != row) out.push_back(i);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Phase 1
// ---------------------------------------------------------------------------

double cap_radius(int d) { return 1.0 / (10.0 * std::sqrt(std::log(static_cast<double>(d)))); }

Matrix cap_simplex(int d) {
  if (d < 3) throw DimensionTooSmall(fmt::format("cap_simplex: d = {} < 3", d));
  // Centered standard basis vectors lie in 1^perp; reflect 1/sqrt(d) onto e_d.
  Eigen::MatrixXd centered = Eigen::MatrixXd::Identity(d, d);
  centered.array() -= 1.0 / d;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  w(d - 1) -= 1.0;
  const Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(d, d) - 2.0 * w * w.transpose() / w.squaredNorm();
  const double r = cap_radius(d);
  Matrix out(d, d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd u = reflect * centered.row(i).transpose();
    u(d - 1) = 0.0;
    u.normalize();
    out.row(i) = r * u.transpose();
    out(i, d - 1) = 3.0;
  }
  return out;
}

UnitLpPrime build_unit_lp_prime(RngStream& rng, const Matrix& A, double sigma) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (d < 3) throw DimensionTooSmall(fmt::format("build_unit_lp_prime: d = {} < 3", d));
  UnitLpPrime lp;
  lp.original_rows = n;
  lp.rotation = random_rotation(rng, d);
  lp.s_bar = cap_simplex(d);
  lp.s = lp.s_bar + gaussian_matrix(rng, d, d, sigma);
  lp.Z = gaussian_vector(rng, Vector::Zero(d), 1.0);
  lp.A.resize(n + d, d);
  lp.A.topRows(n) = A;
  // Row i is (R s_i)^T = s_i^T R^T.
  lp.A.bottomRows(d) = lp.s * lp.rotation.transpose();
  lp.rhs = Vector::Ones(n + d);
  lp.fixed_objective = lp.rotation.col(d - 1);
  for (int i = 0; i < d; ++i) lp.start_indices.push_back(n + i);
  return lp;
}

StartingBasisCheck check_starting_basis(const UnitLpPrime& lp) {
  StartingBasisCheck out;
  try {
    out.basis = make_basis(lp.view(), lp.start_indices);
  } catch (const SingularError&) {
    return out;
  }
  out.factorizable = true;
  out.feasible = max_violation(lp.view(), out.basis->x) <= tol::kFeasibility;
  out.optimal = multipliers(*out.basis, lp.fixed_objective).minCoeff() >= -tol::kOptimality;
  return out;
}

double default_artificial_sigma(int n, int d) {
  const double nn = std::max(n, 2);
  // A quarter of the cap simplex inradius keeps R e_d inside the perturbed cone.
  const double inradius = cap_radius(std::max(d, 3)) / (std::max(d, 3) - 1);
  return std::min(1.0 / (4.0 * std::sqrt(d * std::log(nn))), 0.25 * inradius);
}

Phase1Outcome phase1_solve(RngStream& rng, const Matrix& A, int max_restarts, double artificial_sigma,
                           std::size_t pivot_limit) {
  const int n = static_cast<int>(A.rows());
  const Vector ones = Vector::Ones(n);
  std::size_t pivots = 0;
  int bad_start = 0, cut_off = 0, numerical = 0;
  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    const UnitLpPrime lp = build_unit_lp_prime(rng, A, artificial_sigma);
    StartingBasisCheck start = check_starting_basis(lp);
    if (!start.ok()) {
      ++bad_start;
      continue;
    }
    std::optional<ShadowRun> run;
    try {
      run = run_shadow_path(lp.view(), lp.fixed_objective, lp.Z, std::move(*start.basis),
                            pivot_limit > pivots ? pivot_limit - pivots : 0);
    } catch (const NumericalStall&) {
      ++numerical;
      continue;
    } catch (const CycleDetected&) {
      ++numerical;
      continue;
    } catch (const NegativeStep&) {
      ++numerical;
      continue;
    } catch (const SingularError&) {
      ++numerical;
      continue;
    }
    pivots += run->path.pivots();
    if (auto* ray = std::get_if<UnboundedRay>(&run->outcome)) {
      return Phase1Ray{ray->ray.normalized(), lp.Z, attempt, pivots};
    }
    const Basis& finish = std::get<Finished>(run->outcome).basis;
    if (finish.indices.back() >= n) {
      ++cut_off;
      continue;
    }
    return UnitOptimum{make_basis({A, ones}, finish.indices), lp.Z, attempt, pivots};
  }
  throw RestartLimitExceeded(fmt::format(
      "phase 1: {} attempts failed ({} bad starting bases, {} cut off by artificial rows, {} numerical)",
      max_restarts, bad_start, cut_off, numerical));
}

// ---------------------------------------------------------------------------
// Phase 2
// ---------------------------------------------------------------------------

InterpolationLp build_interpolation_lp(const Matrix& A, const Vector& b, const Vector& Z, double z_extra) {
  const Eigen::Index n = A.rows();
  const Eigen::Index d = A.cols();
  InterpolationLp ip;
  ip.A.resize(n, d + 1);
  ip.A.leftCols(d) = A;
  ip.A.col(d) = Vector::Ones(n) - b;
  ip.rhs = Vector::Ones(n);
  ip.lifted_objective.resize(d + 1);
  ip.lifted_objective << Z, z_extra;
  return ip;
}

Phase2Outcome phase2_solve(RngStream& rng, const Matrix& A, const Vector& b, const Basis& unit_basis,
                           const Vector& Z, std::size_t pivot_limit) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  const double z_extra = rng.normal();
  const InterpolationLp ip = build_interpolation_lp(A, b, Z, z_extra);
  const std::vector<int>& I = unit_basis.indices;

  // The unit basis indexes the edge {A_I x + (1 - b_I) t = 1}; walk it upward in t.
  const Vector gap_I = select_entries(Vector(Vector::Ones(n) - b), I);
  Vector dir(d + 1);
  dir << -unit_basis.factorization.solve(gap_I), 1.0;
  Vector origin(d + 1);
  origin << unit_basis.x, 0.0;
  const Vector slope = ip.A * dir;
  const Vector value = ip.A * origin;
  double t_block = std::numeric_limits<double>::infinity();
  std::optional<int> block;
  for (int i = 0; i < n; ++i) {
    if (unit_basis.contains(i) || !(slope(i) > tol::kDirection)) continue;
    const double t = (1.0 - value(i)) / slope(i);
    if (t < t_block) {
      t_block = t;
      block = i;
    }
  }
  if (!block || t_block >= 1.0) return InputBasis{make_basis({A, b}, I), 0};

  std::vector<int> lifted = I;
  lifted.push_back(*block);
  Basis current = make_basis(ip.view(), lifted);

  // The edge is optimal for (Z, w0); its upper endpoint for (Z, w) with w > w0.
  const double w0 = gap_I.dot(multipliers(unit_basis, Z));
  Vector start_objective(d + 1);
  start_objective << Z, w0;
  const Vector max_t = unit_vector(d + 1, d);
  std::vector<std::pair<Vector, Vector>> legs;
  if (w0 < z_extra) {
    legs.emplace_back(start_objective, ip.lifted_objective);
    legs.emplace_back(ip.lifted_objective, max_t);
  } else {
    legs.emplace_back(start_objective, max_t);
  }

  std::optional<std::vector<int>> crossing;
  const StopPredicate stop = [&](const Basis& at, const PivotOutcome& next) {
    const double t_at = at.x(d);
    if (const auto* adv = std::get_if<Advanced>(&next)) {
      if (t_at < 1.0 && adv->basis.x(d) >= 1.0) crossing = drop_row(at.indices, adv->leaving);
    } else if (const auto* ray = std::get_if<UnboundedRay>(&next)) {
      if (t_at < 1.0 && ray->ray(d) > tol::kDirection) crossing = drop_row(at.indices, ray->leaving);
    }
    return crossing.has_value();
  };

  std::size_t pivots = 0;
  for (const auto& [from, to] : legs) {
    ShadowRun run = run_shadow_path(ip.view(), from, to, std::move(current),
                                    pivot_limit > pivots ? pivot_limit - pivots : 0, stop);
    pivots += run.path.pivots();
    if (crossing) return InputBasis{make_basis({A, b}, *crossing), pivots};
    if (const auto* ray = std::get_if<UnboundedRay>(&run.outcome)) {
      if (std::abs(ray->ray(d)) > tol::kDirection) {
        throw NumericalStall(fmt::format("phase 2: unbounded edge with t-component {}", ray->ray(d)));
      }
      return Phase2Ray{ray->ray.head(d).normalized(), pivots};
    }
    current = std::get<Finished>(run.outcome).basis;
  }

  // `current` maximizes t and max t < 1: its multipliers give a Farkas certificate.
  const double t_star = current.x(d);
  if (t_star >= 1.0) throw NumericalStall(fmt::format("phase 2: max t = {} reached without a crossing", t_star));
  const Vector mu = multipliers(current, max_t);
  Vector y = Vector::Zero(n);
  for (std::size_t k = 0; k < current.indices.size(); ++k) {
    y(current.indices[k]) = std::max(mu(static_cast<Eigen::Index>(k)), 0.0);
  }
  const double l1 = y.sum();
  if (!(l1 > 0.0)) throw CertificateInvalid("phase 2: zero infeasibility certificate");
  y /= l1;
  const CertificateCheck check = verify_outcome(LpInstance{A, b, Vector::Zero(d)}, Infeasible{y});
  if (!check.ok) throw CertificateInvalid("phase 2: " + check.detail);
  return FarkasCertificate{std::move(y), t_star, pivots};
}

// ---------------------------------------------------------------------------
// Phase 3 and orchestration
// ---------------------------------------------------------------------------

std::string outcome_name(const SolveOutcome& outcome) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Optimal>) return "optimal";
        if constexpr (std::is_same_v<T, Unbounded>) return "unbounded";
        return "infeasible";
      },
      outcome);
}

Phase3Result phase3_solve(const LpInstance& lp, Basis z_basis, const Vector& Z, std::size_t pivot_limit) {
  ShadowRun run = run_shadow_path({lp.A, lp.b}, Z, lp.c, std::move(z_basis), pivot_limit);
  if (const auto* ray = std::get_if<UnboundedRay>(&run.outcome)) {
    return Phase3Result{Unbounded{ray->ray.normalized()}, std::move(run.path)};
  }
  const Basis& basis = std::get<Finished>(run.outcome).basis;
  Optimal opt{basis.indices, basis.x, lp.c.dot(basis.x)};
  return Phase3Result{std::move(opt), std::move(run.path)};
}

SolveReport solve(RngStream& rng, const LpInstance& lp, const SolverOptions& options) {
  const int n = lp.rows();
  const int d = lp.dim();
  if (d < 3) throw DimensionTooSmall(fmt::format("solve: d = {} < 3", d));
  if (lp.b.size() != n || lp.c.size() != d) throw Error("solve: inconsistent instance dimensions");
  const double art_sigma = options.artificial_sigma.value_or(default_artificial_sigma(n, d));

  SolveReport report;
  auto finish = [&](SolveOutcome outcome) {
    const CertificateCheck check = verify_outcome(lp, outcome);
    if (!check.ok) throw CertificateInvalid("solve: " + check.detail);
    report.outcome = std::move(outcome);
    return report;
  };

  // A phase-1 ray that does not improve c says nothing about max c^T x; redraw.
  std::optional<UnitOptimum> unit;
  while (!unit) {
    const int budget = options.max_restarts - report.restarts;
    if (budget <= 0) {
      throw RestartLimitExceeded(fmt::format("solve: {} phase-1 attempts exhausted", options.max_restarts));
    }
    Phase1Outcome p1 = phase1_solve(rng, lp.A, budget, art_sigma, options.pivot_limit);
    if (auto* ray = std::get_if<Phase1Ray>(&p1)) {
      report.pivots.phase1 += ray->pivots;
      report.restarts += ray->restarts;
      report.Z = ray->Z;
      if (lp.c.dot(ray->ray) > 0.0) return finish(Unbounded{ray->ray});
      ++report.restarts;
      continue;
    }
    unit = std::move(std::get<UnitOptimum>(p1));
    report.pivots.phase1 += unit->pivots;
    report.restarts += unit->restarts;
    report.Z = unit->Z;
  }

  Phase2Outcome p2 = phase2_solve(rng, lp.A, lp.b, unit->basis, unit->Z, options.pivot_limit);
  if (auto* cert = std::get_if<FarkasCertificate>(&p2)) {
    report.pivots.phase2 = cert->pivots;
    return finish(Infeasible{cert->y});
  }
  if (auto* ray = std::get_if<Phase2Ray>(&p2)) {
    report.pivots.phase2 = ray->pivots;
    if (lp.c.dot(ray->ray) > 0.0) return finish(Unbounded{ray->ray});
    throw NumericalStall("solve: phase 2 produced a recession ray that does not improve c");
  }
  auto& input = std::get<InputBasis>(p2);
  report.pivots.phase2 = input.pivots;
  report.z_basis = input.basis;

  Phase3Result p3 = phase3_solve(lp, std::move(input.basis), unit->Z, options.pivot_limit);
  report.pivots.phase3 = p3.path.pivots();
  report.phase3_path = std::move(p3.path);
  return finish(std::move(p3.outcome));
}

CertificateCheck verify_outcome(const LpInstance& lp, const SolveOutcome& outcome) {
  const ConstraintView sys{lp.A, lp.b};
  if (const auto* opt = std::get_if<Optimal>(&outcome)) {
    if (!opt->x.allFinite()) return {false, "optimal point is not finite"};
    const double viol = max_violation(sys, opt->x);
    if (viol > tol::kFeasibility) return {false, fmt::format("optimal point violates A x <= b by {}", viol)};
    std::optional<Basis> basis;
    try {
      basis = make_basis(sys, opt->basis);
    } catch (const SingularError&) {
      return {false, "optimal basis is singular"};
    }
    const double cn = lp.c.norm();
    if (cn > 0.0) {
      const double worst = multipliers(*basis, lp.c / cn).minCoeff();
      if (worst < -tol::kOptimality) return {false, fmt::format("optimal basis has multiplier {}", worst)};
    }
    return {true, "optimal"};
  }
  if (const auto* unb = std::get_if<Unbounded>(&outcome)) {
    const double rn = unb->ray.norm();
    if (!(rn > 0.0) || !unb->ray.allFinite()) return {false, "ray is zero or not finite"};
    const Vector r = unb->ray / rn;
    const double worst = (lp.A * r).maxCoeff();
    if (worst > 1e-9) return {false, fmt::format("ray has A r = {} > 0", worst)};
    if (!(lp.c.dot(r) > 0.0)) return {false, "ray does not improve c"};
    return {true, "unbounded"};
  }
  const auto& inf = std::get<Infeasible>(outcome);
  if (inf.y.size() != lp.rows() || !inf.y.allFinite()) return {false, "certificate has wrong shape"};
  if (inf.y.minCoeff() < 0.0) return {false, "certificate has a negative entry"};
  const double l1 = inf.y.sum();
  if (!(l1 > 0.0)) return {false, "certificate is zero"};
  const double yA = (inf.y.transpose() * lp.A).cwiseAbs().maxCoeff();
  if (yA > 1e-8 * l1) return {false, fmt::format("certificate has |y^T A| = {}", yA)};
  const double yb = inf.y.dot(lp.b);
  if (!(yb < -1e-10)) return {false, fmt::format("certificate has y^T b = {}", yb)};
  return {true, "infeasible"};
}

}  // namespace shadowlp
