#include "dgff/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgff/error.hpp"

namespace dgff {

std::vector<std::ptrdiff_t> positions(std::size_t vertex_count,
                                      const VertexSet& order) {
  std::vector<std::ptrdiff_t> pos(vertex_count, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos.at(order[i]) = static_cast<std::ptrdiff_t>(i);
  }
  return pos;
}

namespace {

SymMatrix assemble_laplacian(const Graph& g, const VertexSet& domain) {
  const auto pos = positions(g.vertex_count(), domain);
  SymMatrix lap(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const VertexIndex x = domain[i];
    lap.set(i, i, g.pi(x));
    for (const auto& nb : g.neighbors(x)) {
      const auto j = pos[nb.vertex];
      if (j >= 0) {
        lap.set(i, static_cast<std::size_t>(j), -g.edges()[nb.edge].conductance);
      }
    }
  }
  return lap;
}

CholeskyFactor factor_or_throw(const SymMatrix& lap, const Graph& g,
                               const VertexSet& domain) {
  try {
    return CholeskyFactor(lap);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPD) throw;
    std::string what = "Laplacian of {";
    for (std::size_t i = 0; i < domain.size() && i < 8; ++i) {
      what += (i ? ", " : "") + g.id(domain[i]);
    }
    if (domain.size() > 8) what += ", ...";
    throw Error(ErrorCode::NotPD,
                what + "} is not positive definite; a component is sealed off "
                       "from the exterior");
  }
}

}  // namespace

SymMatrix laplacian(const Graph& g, const VertexSet& domain) {
  auto lap = assemble_laplacian(g, domain);
  factor_or_throw(lap, g, domain);
  return lap;
}

SymMatrix laplacian(const Graph& g, const GrowthCluster& cluster) {
  return laplacian(g, cluster.vertices);
}

GreenKernel green(const Graph& g, const VertexSet& domain) {
  const auto lap = assemble_laplacian(g, domain);
  const auto factor = factor_or_throw(lap, g, domain);
  GreenKernel k;
  k.vertices = domain;
  k.normalized = factor.solve(Matrix::identity(domain.size()));
  k.unnormalized = k.normalized;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = 0; j < domain.size(); ++j) {
      k.unnormalized(i, j) *= g.pi(domain[j]);
    }
  }
  return k;
}

GreenKernel green(const Graph& g, const GrowthCluster& cluster) {
  return green(g, cluster.vertices);
}

PoissonKernel poisson(const Graph& g, const VertexSet& domain,
                      const VertexSet& layer) {
  const auto row_pos = positions(g.vertex_count(), domain);
  const auto in_layer = membership(g.vertex_count(), layer);
  for (const auto v : layer) {
    if (row_pos[v] < 0) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer vertex '" + g.id(v) + "' lies outside the domain");
    }
  }

  PoissonKernel p;
  p.rows = domain;
  p.layer = layer;
  p.values = Matrix(domain.size(), layer.size());
  for (std::size_t k = 0; k < layer.size(); ++k) {
    p.values(static_cast<std::size_t>(row_pos[layer[k]]), k) = 1.0;
  }

  VertexSet inner;
  for (const auto v : domain) {
    if (!in_layer[v]) inner.push_back(v);
  }
  if (inner.empty()) return p;

  const auto lap = assemble_laplacian(g, inner);
  const auto factor = factor_or_throw(lap, g, inner);
  std::vector<double> rhs(inner.size());
  for (std::size_t k = 0; k < layer.size(); ++k) {
    for (std::size_t i = 0; i < inner.size(); ++i) {
      rhs[i] = g.conductance(inner[i], layer[k]);
    }
    const auto u = factor.solve(rhs);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      p.values(static_cast<std::size_t>(row_pos[inner[i]]), k) = u[i];
    }
  }
  return p;
}

PoissonKernel poisson(const Graph& g, const GrowthCluster& cluster,
                      const VertexSet& layer) {
  return poisson(g, cluster.vertices, layer);
}

BoundaryGreen boundary_green(const GreenKernel& k, const VertexSet& layer) {
  std::vector<std::size_t> idx;
  idx.reserve(layer.size());
  for (const auto v : layer) {
    const auto it = std::find(k.vertices.begin(), k.vertices.end(), v);
    if (it == k.vertices.end()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "boundary layer is not inside the Green kernel's domain");
    }
    idx.push_back(static_cast<std::size_t>(it - k.vertices.begin()));
  }
  Matrix block(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      block(i, j) = k.normalized(idx[i], idx[j]);
    }
  }
  BoundaryGreen bg{layer, SymMatrix::symmetrized(block)};
  const auto eig = jacobi_eigen(bg.values);
  if (!eig.values.empty() && !(eig.values.front() > 0.0)) {
    throw Error(ErrorCode::NotPD,
                "boundary Green matrix has eigenvalue " +
                    format_real(eig.values.front()));
  }
  return bg;
}

Matrix to_ambient(const Matrix& local, const VertexSet& rows,
                  const VertexSet& cols, std::size_t vertex_count) {
  if (local.rows() != rows.size() || local.cols() != cols.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels do not match matrix shape");
  }
  Matrix out(vertex_count, vertex_count);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(rows[i], cols[j]) = local(i, j);
    }
  }
  return out;
}

ClusterOperators build_cluster_operators(const Graph& g, const Foliation& f,
                                         std::size_t n) {
  ClusterOperators ops;
  ops.cluster = f.cluster(g, n);
  ops.laplacian = assemble_laplacian(g, ops.cluster.vertices);
  ops.green = green(g, ops.cluster.vertices);
  ops.poisson = poisson(g, ops.cluster.vertices, f.layer(n));
  ops.boundary = boundary_green(ops.green, f.layer(n));
  return ops;
}

OperatorFamily::OperatorFamily(Graph g, Foliation f)
    : graph_(std::move(g)), foliation_(std::move(f)) {
  clusters_.reserve(foliation_.layer_count());
  for (std::size_t n = 0; n < foliation_.layer_count(); ++n) {
    clusters_.push_back(build_cluster_operators(graph_, foliation_, n));
  }
}

const ClusterOperators& OperatorFamily::at(std::size_t n) const {
  if (n >= clusters_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "cluster " + std::to_string(n) + " does not exist");
  }
  return clusters_[n];
}

ClusterOperators& OperatorFamily::mutable_at(std::size_t n) {
  if (n >= clusters_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "cluster " + std::to_string(n) + " does not exist");
  }
  return clusters_[n];
}

double green_inverse_residual(const SymMatrix& lap, const GreenKernel& k) {
  const auto id = Matrix::identity(lap.dim());
  const double right = max_abs_diff(lap.matrix() * k.normalized, id);
  const double left = max_abs_diff(k.normalized * lap.matrix(), id);
  return std::max(right, left);
}

double green_symmetry_residual(const Graph& g, const GreenKernel& k) {
  const std::size_t m = k.vertices.size();
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double pi_x = g.pi(k.vertices[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double pi_y = g.pi(k.vertices[j]);
      const double forward = pi_x * k.unnormalized(i, j);
      scale = std::max(scale, std::abs(forward));
      worst = std::max(worst, std::abs(forward - pi_y * k.unnormalized(j, i)));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

PoissonCheck check_poisson(const Graph& g, const PoissonKernel& p) {
  PoissonCheck out;
  out.min_entry = std::numeric_limits<double>::infinity();
  out.max_entry = -std::numeric_limits<double>::infinity();
  out.min_row_sum = std::numeric_limits<double>::infinity();
  out.max_row_sum = -std::numeric_limits<double>::infinity();

  const auto row_pos = positions(g.vertex_count(), p.rows);
  const auto layer_col = positions(g.vertex_count(), p.layer);
  double pi_max = 0.0;
  for (const auto x : p.rows) pi_max = std::max(pi_max, g.pi(x));

  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const VertexIndex x = p.rows[i];
    double row_sum = 0.0;
    for (std::size_t k = 0; k < p.layer.size(); ++k) {
      const double v = p.values(i, k);
      row_sum += v;
      out.min_entry = std::min(out.min_entry, v);
      out.max_entry = std::max(out.max_entry, v);
      if (layer_col[x] >= 0) {
        const double expect = static_cast<std::size_t>(layer_col[x]) == k ? 1.0 : 0.0;
        out.boundary_residual = std::max(out.boundary_residual, std::abs(v - expect));
      } else {
        double lap = g.pi(x) * v;
        for (const auto& nb : g.neighbors(x)) {
          const auto j = row_pos[nb.vertex];
          if (j >= 0) {
            lap -= g.edges()[nb.edge].conductance *
                   p.values(static_cast<std::size_t>(j), k);
          }
        }
        out.harmonic_residual =
            std::max(out.harmonic_residual, std::abs(lap) / pi_max);
      }
    }
    out.min_row_sum = std::min(out.min_row_sum, row_sum);
    out.max_row_sum = std::max(out.max_row_sum, row_sum);
  }
  return out;
}

VariationCheck check_green_variation(const ClusterOperators& previous,
                                     const ClusterOperators& current) {
  const auto& gp = previous.green.unnormalized;
  const auto& gc = current.green.unnormalized;
  const std::size_t mp = previous.cluster.size();
  const std::size_t m = current.cluster.size();
  if (!std::equal(previous.cluster.vertices.begin(),
                  previous.cluster.vertices.end(),
                  current.cluster.vertices.begin()) ||
      mp > m) {
    throw Error(ErrorCode::DimensionMismatch,
                "clusters are not nested in layer order");
  }
  const std::size_t top = current.cluster.top_offset();
  const double scale = gc.max_abs();

  VariationCheck out;
  out.min_increase = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      const double before = (x < mp && y < mp) ? gp(x, y) : 0.0;
      const double lhs = gc(x, y) - before;
      double rhs = 0.0;
      for (std::size_t k = 0; k < current.cluster.top_size; ++k) {
        rhs += current.poisson.values(x, k) * gc(top + k, y);
      }
      out.residual = std::max(out.residual, std::abs(lhs - rhs));
      out.min_increase = std::min(out.min_increase, lhs);
    }
  }
  if (scale > 0.0) {
    out.residual /= scale;
    out.min_increase /= scale;
  }
  return out;
}

VariationCheck verify_green_variation(const Graph& g, const Foliation& f,
                                      std::size_t n) {
  if (n == 0 || n > f.top()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "variation check needs 1 <= n <= " + std::to_string(f.top()));
  }
  return check_green_variation(build_cluster_operators(g, f, n - 1),
                               build_cluster_operators(g, f, n));
}

}  // namespace dgff
