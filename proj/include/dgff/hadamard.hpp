#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dgff/foliation.hpp"
#include "dgff/linalg.hpp"
#include "dgff/operators.hpp"

namespace dgff {

/// Symmetric nonnegative square root of the boundary Green matrix of layer n.
struct LayerSqrt {
  std::size_t index = 0;
  VertexSet layer;
  SymMatrix values;
};

/// K_m = P_m R_m: rows follow cluster m, columns follow layer m.
struct HadamardKernel {
  std::size_t index = 0;
  VertexSet rows;
  VertexSet layer;
  Matrix values;
};

/// Q_n over cluster n (rows and columns in cluster order). Column y is
/// K_{t(y)}(., y) zero-extended below cluster t(y).
struct HadamardMatrix {
  std::size_t index = 0;
  VertexSet vertices;
  Matrix values;

  /// l2 adjoint, i.e. the transpose in the fixed vertex order.
  Matrix adjoint() const { return transpose(values); }
};

LayerSqrt layer_sqrt(const BoundaryGreen& bg, std::size_t index);

HadamardKernel kernel_K(const PoissonKernel& p, const LayerSqrt& r);

/// Assembles Q_n from kernels 0..n. Throws IndexOutOfRange when a kernel is
/// missing and DimensionMismatch when a vertex's layer has no kernel column
/// for it.
HadamardMatrix hadamard_Q(const Foliation& f,
                          std::span<const HadamardKernel> kernels,
                          std::size_t n);

/// Square roots, kernels and Hadamard matrices for every layer of a family.
class HadamardFamily {
 public:
  explicit HadamardFamily(const OperatorFamily& ops);

  std::size_t size() const noexcept { return q_.size(); }
  const LayerSqrt& sqrt(std::size_t m) const { return sqrt_.at(m); }
  const HadamardKernel& kernel(std::size_t m) const { return kernels_.at(m); }
  std::span<const HadamardKernel> kernels() const noexcept { return kernels_; }
  const HadamardMatrix& q(std::size_t n) const { return q_.at(n); }

 private:
  std::vector<LayerSqrt> sqrt_;
  std::vector<HadamardKernel> kernels_;
  std::vector<HadamardMatrix> q_;
};

/// ||R R - G^<n>||_max / ||G^<n>||_max.
double sqrt_residual(const LayerSqrt& r, const BoundaryGreen& bg);

/// ||Q Q^T - G~_n||_max / ||G~_n||_max.
double hadamard_identity_residual(const HadamardMatrix& q,
                                  const GreenKernel& green);

/// Dirichlet Gram matrix <Q delta_x, Q delta_y>_grad over the cluster,
/// evaluated through the coboundary.
Matrix dirichlet_gram(const Graph& g, const HadamardMatrix& q);

/// ||Gram - I||_max.
double isometry_residual(const Graph& g, const HadamardMatrix& q);

/// Largest |entry| of Q in a row outside cluster t(column). Zero by
/// construction.
double triangularity_violation(const Foliation& f, const HadamardMatrix& q);

/// Largest |Laplacian K_m(., xi)| on cluster m-1, relative to max pi.
double kernel_harmonic_residual(const Graph& g, const HadamardKernel& k);

/// Solves Q_n f = b layer by layer from the top layer down, inverting each
/// R_m. `b` is indexed in cluster order.
std::vector<double> solve_layered(const HadamardFamily& h, std::size_t n,
                                  std::span<const double> b);

}  // namespace dgff
