#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dgff {

/// Dense vertex index, fixed when the graph is built.
using VertexIndex = std::size_t;

/// Ordered list of vertex indices.
using VertexSet = std::vector<VertexIndex>;

/// Real function on the vertices, stored over the full vertex range. Values
/// off the support set are zero.
using VertexVector = std::vector<double>;

/// Edge as it appears in input, before ids are resolved.
struct EdgeSpec {
  std::string u;
  std::string v;
  double conductance = 1.0;
};

/// Unordered edge stored once with `u < v`.
struct Edge {
  VertexIndex u = 0;
  VertexIndex v = 0;
  double conductance = 0.0;
};

struct Neighbor {
  VertexIndex vertex = 0;
  std::size_t edge = 0;
};

/// Finite connected graph with positive symmetric conductances and an explicit
/// grounded exterior. Immutable once built.
class Graph {
 public:
  /// Validates and builds a graph. Identical duplicate edges (in either
  /// orientation) collapse to one; duplicates with a different conductance
  /// are rejected.
  static Graph build(std::vector<std::string> vertices,
                     const std::vector<std::string>& exterior,
                     const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& id(VertexIndex v) const { return ids_.at(v); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::optional<VertexIndex> find(std::string_view id) const;
  /// Throws UnknownVertex.
  VertexIndex index_of(std::string_view id) const;

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(VertexIndex v) const {
    return adjacency_.at(v);
  }

  /// Conductance of {x, y}, zero when not adjacent.
  double conductance(VertexIndex x, VertexIndex y) const;

  /// Stationary weight pi(x) = sum of conductances at x.
  double pi(VertexIndex v) const { return pi_.at(v); }
  std::span<const double> pi() const noexcept { return pi_; }

  bool is_exterior(VertexIndex v) const { return exterior_mask_.at(v); }
  const VertexSet& exterior() const noexcept { return exterior_; }
  VertexSet interior() const;

  /// Copy with one conductance overwritten and no revalidation; pi keeps its
  /// old values. Only meant for negative-control runs.
  Graph with_tampered_conductance(std::size_t edge, double conductance) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> pi_;
  std::vector<bool> exterior_mask_;
  VertexSet exterior_;
};

/// Recomputes sum_{y~x} c(x,y) in adjacency order.
std::vector<double> recompute_pi(const Graph& g);

/// Function on oriented edges with phi(x,y) = -phi(y,x). One value per
/// stored edge, read as the value on the orientation (u, v) with u < v.
struct EdgeField {
  std::vector<double> values;

  /// Value on the oriented edge (x, y); the edge must exist.
  double at(const Graph& g, VertexIndex x, VertexIndex y) const;
};

/// Weighted coboundary: df(x,y) = sqrt(c(x,y)) (f(x) - f(y)).
EdgeField coboundary(const Graph& g, std::span<const double> f);

/// Weighted boundary d*phi(x) = sum_{y~x} sqrt(c(x,y)) phi(x,y), over all
/// vertices.
VertexVector boundary_adjoint(const Graph& g, const EdgeField& phi);

/// Same, truncated to `domain` (zero elsewhere).
VertexVector boundary_adjoint(const Graph& g, const EdgeField& phi,
                              const VertexSet& domain);

/// Single-orientation edge inner product sum_e phi(e) psi(e).
double edge_inner(const EdgeField& phi, const EdgeField& psi);

/// Dirichlet inner product <df, dg> with f and g read as elements of
/// l2(domain), i.e. zeroed outside `domain` before differencing.
double dirichlet_inner(const Graph& g, std::span<const double> f,
                       std::span<const double> g_values,
                       const VertexSet& domain);

/// Membership mask of `set` over the vertex range.
std::vector<bool> membership(std::size_t vertex_count, const VertexSet& set);

/// Copy of `f` zeroed outside `domain`.
VertexVector restrict_to(std::span<const double> f, const VertexSet& domain);

}  // namespace dgff
