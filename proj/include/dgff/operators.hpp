#pragma once

#include <cstddef>
#include <vector>

#include "dgff/foliation.hpp"
#include "dgff/graph.hpp"
#include "dgff/linalg.hpp"

namespace dgff {

/// Green kernel of a vertex set with grounded complement. `normalized` is
/// G~ = Laplacian^{-1}; `unnormalized` is G(x,y) = G~(x,y) pi(y). Rows and
/// columns follow `vertices`.
struct GreenKernel {
  VertexSet vertices;
  Matrix normalized;
  Matrix unnormalized;
};

/// Harmonic-extension weights P(x, xi): rows follow `rows` (the whole
/// domain), columns follow `layer`.
struct PoissonKernel {
  VertexSet rows;
  VertexSet layer;
  Matrix values;
};

/// Normalized Green kernel restricted to the top layer.
struct BoundaryGreen {
  VertexSet layer;
  SymMatrix values;
};

/// Position of each vertex in `order`, or -1.
std::vector<std::ptrdiff_t> positions(std::size_t vertex_count,
                                      const VertexSet& order);

/// Laplacian truncated to `domain`: pi(x) on the diagonal, -c(x,y) between
/// neighbours inside the domain. Throws NotPD (via a Cholesky attempt) when
/// some component of the domain is sealed off from its complement.
SymMatrix laplacian(const Graph& g, const VertexSet& domain);
SymMatrix laplacian(const Graph& g, const GrowthCluster& cluster);

/// Green kernel by one Cholesky factorization and a solve per unit column.
GreenKernel green(const Graph& g, const VertexSet& domain);
GreenKernel green(const Graph& g, const GrowthCluster& cluster);

/// Poisson kernel of `domain` with boundary layer `layer` (a subset of the
/// domain): each column is the function equal to delta_xi on the layer,
/// harmonic on domain \ layer, and zero outside the domain. An empty
/// interior gives the identity.
PoissonKernel poisson(const Graph& g, const VertexSet& domain,
                      const VertexSet& layer);
PoissonKernel poisson(const Graph& g, const GrowthCluster& cluster,
                      const VertexSet& layer);

/// Restriction of the normalized Green kernel to `layer`; throws NotPD unless
/// every eigenvalue is positive.
BoundaryGreen boundary_green(const GreenKernel& k, const VertexSet& layer);

/// Zero-extends a local matrix to the ambient vertex range.
Matrix to_ambient(const Matrix& local, const VertexSet& rows,
                  const VertexSet& cols, std::size_t vertex_count);

/// Everything built for cluster n of a foliation.
struct ClusterOperators {
  GrowthCluster cluster;
  SymMatrix laplacian;
  GreenKernel green;
  PoissonKernel poisson;
  BoundaryGreen boundary;
};

ClusterOperators build_cluster_operators(const Graph& g, const Foliation& f,
                                         std::size_t n);

/// Operators for every cluster 0..N of a foliation. Holds its own copies of
/// the graph and foliation.
class OperatorFamily {
 public:
  OperatorFamily(Graph g, Foliation f);

  const Graph& graph() const noexcept { return graph_; }
  const Foliation& foliation() const noexcept { return foliation_; }
  std::size_t size() const noexcept { return clusters_.size(); }
  std::size_t top() const noexcept { return clusters_.size() - 1; }
  const ClusterOperators& at(std::size_t n) const;
  /// Mutable access for negative-control tampering.
  ClusterOperators& mutable_at(std::size_t n);

 private:
  Graph graph_;
  Foliation foliation_;
  std::vector<ClusterOperators> clusters_;
};

/// max(||L G~ - I||_max, ||G~ L - I||_max).
double green_inverse_residual(const SymMatrix& lap, const GreenKernel& k);

/// max |pi(x) G(x,y) - pi(y) G(y,x)| relative to max |pi(x) G(x,y)|.
double green_symmetry_residual(const Graph& g, const GreenKernel& k);

struct PoissonCheck {
  /// Largest deviation from delta on the layer rows; exact construction
  /// gives zero.
  double boundary_residual = 0.0;
  /// Largest |Laplacian P(., xi)| on domain \ layer, relative to max pi.
  double harmonic_residual = 0.0;
  double min_entry = 0.0;
  double max_entry = 0.0;
  double min_row_sum = 0.0;
  double max_row_sum = 0.0;
};

PoissonCheck check_poisson(const Graph& g, const PoissonKernel& p);

struct VariationCheck {
  /// max |G_n - G_{n-1} - sum_xi P_n(x,xi) G_n(xi,y)| / max |G_n|.
  double residual = 0.0;
  /// min (G_n - G_{n-1}) / max |G_n|; nonnegative up to rounding.
  double min_increase = 0.0;
};

/// Green variation identity between consecutive clusters; n >= 1.
VariationCheck check_green_variation(const ClusterOperators& previous,
                                     const ClusterOperators& current);
VariationCheck verify_green_variation(const Graph& g, const Foliation& f,
                                      std::size_t n);

}  // namespace dgff
