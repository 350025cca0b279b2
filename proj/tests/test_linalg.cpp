#include <doctest.h>

#include "shadowlp/linalg.hpp"
#include "shadowlp/random.hpp"

using namespace shadowlp;

TEST_CASE("identity factorizes with unit pivots") {
  const BasisFactorization f = factorize(Matrix::Identity(3, 3));
  CHECK(f.min_pivot() == 1.0);
  CHECK(f.max_pivot() == 1.0);
}

TEST_CASE("duplicated row is singular") {
  Matrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 1, 2, 3;
  CHECK_THROWS_AS(factorize(m), SingularError);
  CHECK_THROWS_AS(factorize(Matrix(m.transpose())), SingularError);
}

TEST_CASE("random Gaussian 5x5 reconstructs") {
  RngStream rng(11, 0);
  const Matrix m = gaussian_matrix(rng, 5, 5, 1.0);
  const BasisFactorization f = factorize(m);
  CHECK((f.reconstruct() - m).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("small solves") {
  Vector rhs(2);
  rhs << 2, 3;
  CHECK(solve(factorize(Matrix::Identity(2, 2)), rhs).isApprox(rhs));

  Matrix d(2, 2);
  d << 2, 0, 0, 4;
  Vector r2(2);
  r2 << 2, 4;
  const Vector x = solve(factorize(d), r2);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));

  Vector e1(2);
  e1 << 1, 0;
  CHECK(solve_transpose(factorize(Matrix::Identity(2, 2)), e1).isApprox(e1));

  // A^T mu = (1,1) for A = [[1,1],[0,1]] gives mu = (1,0).
  Matrix u(2, 2);
  u << 1, 1, 0, 1;
  const Vector mu = solve_transpose(factorize(u), Vector::Ones(2));
  CHECK(mu(0) == doctest::Approx(1.0));
  CHECK(std::abs(mu(1)) < 1e-15);
}

TEST_CASE("seeded systems meet the residual tolerance") {
  RngStream rng(12, 0);
  const Matrix m = gaussian_matrix(rng, 6, 6, 1.0);
  const Vector rhs = gaussian_vector(rng, Vector::Zero(6), 1.0);
  const BasisFactorization f = factorize(m);
  const double bound = 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff());
  CHECK((m * solve(f, rhs) - rhs).cwiseAbs().maxCoeff() <= bound);
  CHECK((m.transpose() * solve_transpose(f, rhs) - rhs).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("solve then apply over 1000 random matrices") {
  RngStream rng(13, 0);
  int tested = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 7;
    const Matrix m = gaussian_matrix(rng, d, d, 1.0);
    const Vector rhs = gaussian_vector(rng, Vector::Zero(d), 1.0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
    if (!(cond < 1e8)) continue;
    ++tested;
    const BasisFactorization f = factorize(m);
    const double bound = 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff());
    REQUIRE((m * f.solve(rhs) - rhs).cwiseAbs().maxCoeff() <= bound);
    REQUIRE((m.transpose() * f.solve_transpose(rhs) - rhs).cwiseAbs().maxCoeff() <= bound);
    // Transposition agrees on the verdict.
    CHECK_NOTHROW(factorize(Matrix(m.transpose())));
  }
  CHECK(tested > 900);
}

TEST_CASE("near-singular by the relative pivot rule") {
  Matrix m(2, 2);
  m << 1, 1, 1, 1 + 1e-14;
  CHECK_THROWS_AS(factorize(m), SingularError);
  m(1, 1) = 1 + 1e-6;
  CHECK_NOTHROW(factorize(m));
}

TEST_CASE("row selection") {
  Matrix m(3, 2);
  m << 1, 2, 3, 4, 5, 6;
  const std::vector<int> rows{2, 0};
  const Matrix s = select_rows(m, rows);
  CHECK(s(0, 0) == 5);
  CHECK(s(1, 1) == 2);
  Vector v(3);
  v << 7, 8, 9;
  const Vector sv = select_entries(v, rows);
  CHECK(sv(0) == 9);
  CHECK(sv(1) == 7);
}
