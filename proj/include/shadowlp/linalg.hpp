#pragma once

#include <span>

#include <Eigen/Dense>

#include "shadowlp/errors.hpp"

namespace shadowlp {

/// Row-major dense matrix; constraint rows are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Relative pivot threshold below which a square matrix is declared singular.
inline constexpr double kSingularPivotTol = 1e-12;

/// LU factorization with partial pivoting of a square basis matrix.
///
/// Construction fails with SingularError when the smallest pivot magnitude
/// drops below kSingularPivotTol times the largest entry of the source matrix.
/// Instances are immutable and cheap to copy for the small dimensions used here.
class BasisFactorization {
 public:
  explicit BasisFactorization(const Eigen::Ref<const Matrix>& m);

  int dim() const { return static_cast<int>(lu_.rows()); }

  /// Solves m x = rhs.
  Vector solve(const Eigen::Ref<const Vector>& rhs) const;
  /// Solves m^T x = rhs.
  Vector solve_transpose(const Eigen::Ref<const Vector>& rhs) const;

  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }
  double max_entry() const { return max_entry_; }
  /// Reciprocal of LAPACK-style 1-norm condition estimate.
  double rcond() const { return lu_.rcond(); }

  /// P^{-1} L U, reassembled; used by tests.
  Matrix reconstruct() const { return lu_.reconstructedMatrix(); }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
  double max_entry_ = 0.0;
};

inline BasisFactorization factorize(const Eigen::Ref<const Matrix>& m) { return BasisFactorization(m); }
inline Vector solve(const BasisFactorization& f, const Eigen::Ref<const Vector>& rhs) { return f.solve(rhs); }
inline Vector solve_transpose(const BasisFactorization& f, const Eigen::Ref<const Vector>& rhs) {
  return f.solve_transpose(rhs);
}

/// Rows of `m` selected by `rows`, in the given order.
Matrix select_rows(const Matrix& m, std::span<const int> rows);
Vector select_entries(const Vector& v, std::span<const int> rows);

}  // namespace shadowlp
