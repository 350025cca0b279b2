#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shadowlp/random.hpp"

using namespace shadowlp;

TEST_CASE("equal seed and stream reproduce draws") {
  RngStream a(5, 9), b(5, 9);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  RngStream d(5, 9), e(5, 10);
  CHECK(d.next_u64() != e.next_u64());
  CHECK(RngStream(1, 2).derive(3).stream() == RngStream(1, 2).derive(3).stream());
  CHECK(RngStream(1, 2).derive(3).stream() != RngStream(1, 2).derive(4).stream());
}

TEST_CASE("gaussian_vector") {
  RngStream rng(1, 0);
  Vector mean(3);
  mean << 1, -2, 3;
  CHECK(gaussian_vector(rng, mean, 0.0) == mean);

  const int N = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) sum += gaussian_vector(rng, Vector::Zero(1), 1.0)(0);
  CHECK(std::abs(sum / N) < 4.0 / std::sqrt(N));

  // Norm of a 3-d N(0, 0.01 I) vector beyond 4 sigma sqrt(3 ln 100).
  const double radius = 4.0 * 0.1 * std::sqrt(3.0 * std::log(100.0));
  int over = 0;
  for (int i = 0; i < N; ++i) over += gaussian_vector(rng, Vector::Zero(3), 0.1).norm() > radius;
  CHECK(static_cast<double>(over) / N < 1e-4);
}

TEST_CASE("exp_ball_sample moments") {
  RngStream rng(2, 0);
  const int N = 1'000'000;
  for (int d : {2, 3, 5}) {
    double m1 = 0, m2 = 0, m3 = 0;
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) {
      r[i] = exp_ball_sample(rng, d).norm();
      m1 += r[i];
      m2 += r[i] * r[i];
      m3 += r[i] * r[i] * r[i];
    }
    m1 /= N;
    m2 /= N;
    m3 /= N;
    // (k + d - 1)! / (d - 1)!
    const double e1 = d, e2 = d * (d + 1.0), e3 = d * (d + 1.0) * (d + 2.0);
    // Variances of r^k are E r^{2k} - (E r^k)^2.
    const double e4 = e3 * (d + 3.0), e6 = e4 * (d + 4.0) * (d + 5.0);
    CAPTURE(d);
    CHECK(std::abs(m1 - e1) <= 3.0 * std::sqrt((e2 - e1 * e1) / N));
    CHECK(std::abs(m2 - e2) <= 3.0 * std::sqrt((e4 - e2 * e2) / N));
    CHECK(std::abs(m3 - e3) <= 3.0 * std::sqrt((e6 - e3 * e3) / N));
    if (d == 3) {
      CHECK(std::abs(m1 - 3.0) <= 0.02 * 3.0);
      CHECK(std::abs(m2 - 12.0) <= 0.03 * 12.0);
    }
  }
}

TEST_CASE("exponential tail at d=3, t=2") {
  RngStream rng(3, 0);
  const int N = 200'000;
  const double cut = 2.0 * std::numbers::e * 3.0 * std::log(2.0);
  CHECK(cut == doctest::Approx(11.30).epsilon(1e-3));
  int over = 0;
  for (int i = 0; i < N; ++i) over += exp_ball_sample(rng, 3).norm() >= cut;
  CHECK(static_cast<double>(over) / N <= 0.125);
}

TEST_CASE("uniform_sphere") {
  RngStream rng(4, 0);
  SUBCASE("d=1 is a fair sign") {
    const int N = 10'000;
    int plus = 0;
    for (int i = 0; i < N; ++i) {
      const Vector v = uniform_sphere(rng, 1);
      REQUIRE(std::abs(std::abs(v(0)) - 1.0) < 1e-12);
      plus += v(0) > 0;
    }
    const double chi2 = 2.0 * std::pow(plus - N / 2.0, 2) / (N / 2.0);
    CHECK(chi2 < 6.635);  // 1 degree of freedom, 0.01 level
  }
  SUBCASE("unit norm and centered mean") {
    const int N = 1'000'000;
    Vector mean = Vector::Zero(4);
    for (int i = 0; i < N; ++i) {
      const Vector v = uniform_sphere(rng, 4);
      REQUIRE(std::abs(v.norm() - 1.0) < 1e-12);
      mean += v;
    }
    CHECK((mean / N).norm() <= 4.0 / std::sqrt(N));
  }
  SUBCASE("sphere mass near the equator, d=5") {
    const int N = 200'000;
    int in = 0;
    for (int i = 0; i < N; ++i) in += std::abs(uniform_sphere(rng, 5)(0)) <= 0.05;
    CHECK(static_cast<double>(in) / N <= 0.05 * std::sqrt(5.0 * std::numbers::e));
  }
  SUBCASE("sphere tail, d=4, t=3") {
    const int N = 200'000;
    int in = 0;
    for (int i = 0; i < N; ++i) in += std::abs(uniform_sphere(rng, 4)(0)) >= 3.0 / 2.0;
    CHECK(static_cast<double>(in) / N <= std::sqrt(4.0 * std::numbers::e) * std::exp(-4.5));
  }
}

TEST_CASE("random_rotation") {
  RngStream rng(6, 0);
  for (int k = 0; k < 1000; ++k) {
    const int d = 1 + k % 6;
    const Matrix R = random_rotation(rng, d);
    REQUIRE((R.transpose() * R - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(std::abs(R.determinant() - 1.0) < 1e-10);
  }
  // R e_1 behaves like a uniform sphere point.
  const int N = 100'000;
  int in = 0;
  for (int i = 0; i < N; ++i) in += std::abs(random_rotation(rng, 3)(2, 0)) <= 0.05;
  CHECK(static_cast<double>(in) / N <= 0.05 * std::sqrt(3.0 * std::numbers::e));
}

TEST_CASE("smoothed_instance") {
  RngStream rng(7, 0);
  const int n = 20, d = 3;
  Matrix abar(n, d);
  for (int i = 0; i < n; ++i) abar.row(i) = 0.5 * uniform_sphere(rng, d).transpose();
  const Vector bbar = Vector::Constant(n, 0.5);
  const Vector c = Vector::Ones(d);

  const SmoothedInstance s = smoothed_instance(rng, abar, bbar, c, 0.05, true);
  CHECK(s.lp.A == s.abar + s.noise_A);
  CHECK(s.lp.b == s.bbar + s.noise_b);

  const SmoothedInstance u = smoothed_instance(rng, abar, Vector::Ones(n), c, 0.05, false);
  CHECK(u.lp.b == Vector::Ones(n));

  Matrix bad = abar;
  bad.row(3) *= 3.0;
  CHECK_THROWS_AS(smoothed_instance(rng, bad, bbar, c, 0.05, true), NormViolation);

  // Two runs from the same stream agree bit for bit.
  RngStream r1(8, 1), r2(8, 1);
  CHECK(smoothed_instance(r1, abar, bbar, c, 0.1, true).lp.A == smoothed_instance(r2, abar, bbar, c, 0.1, true).lp.A);

  // Global diameter event.
  const double radius = 1.0 + 4.0 * 0.05 * std::sqrt(3.0 * std::log(20.0));
  int ok = 0;
  const int runs = 2000;
  for (int k = 0; k < runs; ++k) {
    const SmoothedInstance t = smoothed_instance(rng, abar, bbar, c, 0.05, true);
    ok += t.lp.A.rowwise().norm().maxCoeff() <= radius;
  }
  CHECK(static_cast<double>(ok) / runs >= 1.0 - std::pow(20.0, -3.0) - 3.0 / runs);
}
