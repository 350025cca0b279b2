#include "shadowlp/random.hpp"

#include <cmath>
#include <string>

namespace shadowlp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

RngStream RngStream::derive(std::uint64_t tag) const {
  return RngStream(seed_, splitmix64(stream_ ^ splitmix64(tag + 0x632be59bd9b4e019ULL)));
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RngStream::gamma(double shape) {
  if (shape < 1.0) {
    // Boost to shape + 1 and rescale by U^{1/shape}.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double dd = shape - 1.0 / 3.0;
  const double cc = 1.0 / std::sqrt(9.0 * dd);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + cc * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return dd * v;
    if (std::log(u) < 0.5 * x2 + dd * (1.0 - v + std::log(v))) return dd * v;
  }
}

Vector gaussian_vector(RngStream& rng, const Vector& mean, double sigma) {
  Vector out = mean;
  if (sigma == 0.0) return out;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += sigma * rng.normal();
  return out;
}

Matrix gaussian_matrix(RngStream& rng, int rows, int cols, double sigma) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = sigma * rng.normal();
  return out;
}

Vector uniform_sphere(RngStream& rng, int d) {
  Vector g(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) g(i) = rng.normal();
    norm = g.norm();
  } while (norm == 0.0);
  return g / norm;
}

Vector exp_ball_sample(RngStream& rng, int d) {
  const Vector direction = uniform_sphere(rng, d);
  return rng.gamma(static_cast<double>(d)) * direction;
}

Matrix random_rotation(RngStream& rng, int d) {
  const Eigen::MatrixXd g = gaussian_matrix(rng, d, d, 1.0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

SmoothedInstance smoothed_instance(RngStream& rng, const Matrix& abar, const Vector& bbar,
                                   const Vector& c, double sigma, bool perturb_b) {
  if (bbar.size() != abar.rows()) throw NormViolation("smoothed_instance: bbar length mismatch");
  if (!(sigma > 0.0)) throw NormViolation("smoothed_instance: sigma must be positive");
  constexpr double kTol = 1e-12;
  for (Eigen::Index i = 0; i < abar.rows(); ++i) {
    double sq = abar.row(i).squaredNorm();
    if (perturb_b) sq += bbar(i) * bbar(i);
    if (std::sqrt(sq) > 1.0 + kTol) {
      throw NormViolation("smoothed_instance: row " + std::to_string(i) + " has norm " +
                          std::to_string(std::sqrt(sq)) + " > 1");
    }
  }
  SmoothedInstance out;
  out.abar = abar;
  out.bbar = bbar;
  out.sigma = sigma;
  out.perturb_b = perturb_b;
  const int n = static_cast<int>(abar.rows());
  const int d = static_cast<int>(abar.cols());
  out.noise_A = gaussian_matrix(rng, n, d, sigma);
  out.noise_b = Vector::Zero(n);
  if (perturb_b) {
    for (int i = 0; i < n; ++i) out.noise_b(i) = sigma * rng.normal();
  }
  out.lp.A = abar + out.noise_A;
  out.lp.b = bbar + out.noise_b;
  out.lp.c = c;
  return out;
}

}  // namespace shadowlp
