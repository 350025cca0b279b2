#include "shadowlp/linalg.hpp"

#include <span>
#include <string>

namespace shadowlp {

BasisFactorization::BasisFactorization(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols()) {
    throw SingularError("factorize: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", not square");
  }
  if (!m.allFinite()) throw SingularError("factorize: non-finite entry");
  max_entry_ = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  lu_.compute(Eigen::MatrixXd(m));
  const auto pivots = lu_.matrixLU().diagonal().cwiseAbs();
  min_pivot_ = pivots.size() == 0 ? 0.0 : pivots.minCoeff();
  max_pivot_ = pivots.size() == 0 ? 0.0 : pivots.maxCoeff();
  if (max_entry_ == 0.0 || min_pivot_ < kSingularPivotTol * max_entry_) {
    throw SingularError("factorize: numerically singular (min pivot " + std::to_string(min_pivot_) +
                        ", max entry " + std::to_string(max_entry_) + ")");
  }
}

Vector BasisFactorization::solve(const Eigen::Ref<const Vector>& rhs) const { return lu_.solve(rhs); }

Vector BasisFactorization::solve_transpose(const Eigen::Ref<const Vector>& rhs) const {
  return lu_.transpose().solve(rhs);
}

Matrix select_rows(const Matrix& m, std::span<const int> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  return out;
}

Vector select_entries(const Vector& v, std::span<const int> rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(rows[k]);
  return out;
}

}  // namespace shadowlp
