#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dgff/foliation.hpp"
#include "dgff/graph.hpp"
#include "dgff/hadamard.hpp"
#include "dgff/linalg.hpp"
#include "dgff/operators.hpp"

namespace dgff {

// Substream layout. White noise at vertex y reads substream y; the oracle
// and the rotated-basis sampler read disjoint ranges above 2^32.
inline constexpr std::uint64_t kOracleSubstreamBase = 1ull << 32;
inline constexpr std::uint64_t kBasisSubstreamBase = 2ull << 32;
inline constexpr std::uint64_t kBasisMatrixSubstream = 3ull << 32;

enum class FieldKind { WhiteNoise, Dgff, Increment };

struct FieldSample {
  FieldKind kind = FieldKind::WhiteNoise;
  std::size_t index = 0;
  VertexVector values;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// White noise in the Kronecker basis: Phi(y) = normal draw `trial` of
/// substream y for y in `domain`, zero elsewhere.
FieldSample sample_wnf(std::size_t vertex_count, const VertexSet& domain,
                       std::uint64_t seed, std::uint64_t trial);

/// White noise expanded in the orthonormal columns of `basis` (rows follow
/// `domain`): Phi = sum_k xi_k e_k.
FieldSample sample_wnf_in_basis(std::size_t vertex_count,
                                const VertexSet& domain, const Matrix& basis,
                                std::uint64_t seed, std::uint64_t trial);

/// Orthonormal d x d matrix: eigenvectors of a seeded symmetric Gaussian
/// matrix.
Matrix random_orthogonal(std::size_t d, std::uint64_t seed);

/// Psi_n = Q_n [1_{cluster n} Phi], zero off cluster n.
FieldSample grow_dgff(const HadamardFamily& h, const FieldSample& phi,
                      std::size_t n);

/// Psi_n - Psi_{n-1}; for n = 0 this is Psi_0.
FieldSample increment(const HadamardFamily& h, const FieldSample& phi,
                      std::size_t n);

/// Poisson extension of the layer noise sum_y R_n(eta, y) Phi(y), evaluated
/// as P_n (R_n Phi|layer). Equals increment(h, phi, n) exactly in theory.
VertexVector poisson_layer_noise(const OperatorFamily& ops,
                                 const HadamardFamily& h,
                                 const FieldSample& phi, std::size_t n);

/// Independent reference sampler: Psi = L z with L L^T = G~_n.
class OracleSampler {
 public:
  explicit OracleSampler(const GreenKernel& green);

  const Matrix& factor() const noexcept { return factor_; }
  FieldSample sample(std::size_t vertex_count, std::uint64_t seed,
                     std::uint64_t trial) const;

 private:
  VertexSet vertices_;
  Matrix factor_;
};

/// Known-zero-mean second moments sum x x^T / N.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t dim) : sum_(dim, dim) {}

  void add(std::span<const double> x);
  /// Associative merge for per-worker accumulators.
  void merge(const MomentAccumulator& other);

  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return sum_.rows(); }
  Matrix covariance() const;

 private:
  Matrix sum_;
  std::size_t count_ = 0;
};

/// (empirical - exact) / se, with se = 0 treated as exact agreement when the
/// difference is below 1e-12 and as an infinite score otherwise.
double z_score(double empirical, double exact, double se);

struct CovarianceReport {
  Matrix empirical;
  Matrix exact;
  Matrix z;
  double max_abs_z = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// z-scores against an exact Gaussian covariance, se_xy =
/// sqrt((s_xx s_yy + s_xy^2) / N) from the exact matrix.
CovarianceReport covariance_report(const Matrix& empirical, const Matrix& exact,
                                   std::size_t samples, std::uint64_t seed);

/// Entrywise two-sample z-scores between independent empirical covariances,
/// each standard error estimated from its own sample.
Matrix two_sample_z(const Matrix& a, std::size_t na, const Matrix& b,
                    std::size_t nb);

/// Largest |z| over entries (i, j) where `mask(i, j)` is nonzero.
double max_abs_masked(const Matrix& z, const Matrix& mask);

/// Empirical covariance of Psi_n over cluster n (cluster order), N trials.
CovarianceReport dgff_covariance(const HadamardFamily& h,
                                 const OperatorFamily& ops, std::size_t n,
                                 std::size_t trials, std::uint64_t seed);

CovarianceReport oracle_covariance(const OperatorFamily& ops, std::size_t n,
                                   std::size_t trials, std::uint64_t seed);

/// Joint covariance of the stacked increments (Psi_0, Psi_1 - Psi_0, ...,
/// Psi_N - Psi_{N-1}) over cluster N. The exact matrix is block diagonal
/// with blocks K_k K_k^T.
struct IncrementReport {
  CovarianceReport joint;
  /// Largest |z| over the off-diagonal (cross-increment) blocks.
  double max_cross_z = 0.0;
  /// Largest |z| over the diagonal blocks.
  double max_block_z = 0.0;
};

IncrementReport increment_covariance(const HadamardFamily& h,
                                     const OperatorFamily& ops,
                                     std::size_t trials, std::uint64_t seed);

struct BrownianReport {
  VertexVector f;
  /// ||Q_n^* f||^2 for n = 0..N: the Brownian time of step n.
  std::vector<double> variance_targets;
  /// layer_energy[n][k] = ||1_{layer k} Q_n^* f||^2.
  std::vector<std::vector<double>> layer_energy;
  /// max_n |sum_k layer_energy[n][k] - variance_targets[n]|, relative.
  double pythagoras_residual = 0.0;
  bool monotone = true;
  /// Cov(F_n, F_m) with F_n = <f, Psi_n>; exact value targets[min(n, m)].
  CovarianceReport moments;
};

/// Exact part only (no trials).
BrownianReport brownian_targets(const HadamardFamily& h, const Foliation& f,
                                std::span<const double> test_vector);

/// Throws SupportViolation unless `test_vector` vanishes off cluster N.
BrownianReport brownian_check(const HadamardFamily& h, const Foliation& f,
                              std::span<const double> test_vector,
                              std::size_t trials, std::uint64_t seed);

struct SweepReport {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  /// Boundary averages A_n(f) = <P_n^* f, Psi_{n2}> for n = n1..n2, compared
  /// per sample with F_{n2}(f) - F_{n-1}(f); relative max deviation.
  double identity_residual = 0.0;
  /// ||Q_{n2}^* f||^2 - ||Q_{n-1}^* f||^2 for n = n1..n2.
  std::vector<double> variance_targets;
  /// E(A_n A_m) = ||Q_{n2}^* f||^2 - ||Q_{max(n,m)-1}^* f||^2.
  CovarianceReport moments;
};

/// Throws SupportViolation unless `test_vector` vanishes off cluster n1, and
/// IndexOutOfRange unless n1 <= n2 <= N.
SweepReport sweep_average_check(const OperatorFamily& ops,
                                const HadamardFamily& h,
                                std::span<const double> test_vector,
                                std::size_t n1, std::size_t n2,
                                std::size_t trials, std::uint64_t seed);

}  // namespace dgff
