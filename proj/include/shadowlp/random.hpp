#pragma once

#include <cstdint>
#include <random>

#include "shadowlp/linalg.hpp"
#include "shadowlp/lp.hpp"

namespace shadowlp {

/// Deterministic random stream keyed by (seed, stream id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// are specified bit-exactly by the standard. Distributions are implemented
/// here rather than taken from <random>, whose algorithms are left to the
/// library vendor. Streams are single-owner; share randomness by deriving a
/// new stream id.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Fresh stream with the same seed and a different id.
  RngStream with_stream(std::uint64_t stream) const { return RngStream(seed_, stream); }
  /// Child stream whose id is a hash of this stream's id and `tag`.
  RngStream derive(std::uint64_t tag) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// mean + sigma * (iid standard normals).
Vector gaussian_vector(RngStream& rng, const Vector& mean, double sigma);
/// rows x cols matrix of iid N(0, sigma^2).
Matrix gaussian_matrix(RngStream& rng, int rows, int cols, double sigma);

/// Sample with density proportional to exp(-||x||) on R^d.
Vector exp_ball_sample(RngStream& rng, int d);
/// Uniform point on the unit sphere S^{d-1}.
Vector uniform_sphere(RngStream& rng, int d);
/// Haar-distributed rotation (orthogonal, determinant +1).
Matrix random_rotation(RngStream& rng, int d);

struct SmoothedInstance {
  Matrix abar;
  Vector bbar;
  double sigma = 0.0;
  Matrix noise_A;  // A - abar
  Vector noise_b;  // b - bbar; zero when b is not perturbed
  bool perturb_b = true;
  LpInstance lp;   // perturbed data and objective
};

/// Adds N(0, sigma^2) noise to abar (and to bbar when `perturb_b`).
///
/// Rows of (abar, bbar) must have norm at most 1 (1 + 1e-12). With a fixed
/// right-hand side only the rows of abar are checked.
/// Throws NormViolation.
SmoothedInstance smoothed_instance(RngStream& rng, const Matrix& abar, const Vector& bbar,
                                   const Vector& c, double sigma, bool perturb_b);

}  // namespace shadowlp
