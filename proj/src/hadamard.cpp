#include "dgff/hadamard.hpp"

#include <algorithm>
#include <cmath>

#include "dgff/error.hpp"
#include "dgff/graph.hpp"

namespace dgff {

LayerSqrt layer_sqrt(const BoundaryGreen& bg, std::size_t index) {
  return LayerSqrt{index, bg.layer, psd_sqrt(bg.values)};
}

HadamardKernel kernel_K(const PoissonKernel& p, const LayerSqrt& r) {
  if (p.layer != r.layer) {
    throw Error(ErrorCode::DimensionMismatch,
                "Poisson kernel and square root refer to different layers");
  }
  return HadamardKernel{r.index, p.rows, p.layer, p.values * r.values.matrix()};
}

HadamardMatrix hadamard_Q(const Foliation& f,
                          std::span<const HadamardKernel> kernels,
                          std::size_t n) {
  if (n >= kernels.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "kernels 0.." + std::to_string(n) + " are required");
  }
  HadamardMatrix q;
  q.index = n;
  q.vertices = kernels[n].rows;
  const std::size_t m = q.vertices.size();
  q.values = Matrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    const VertexIndex y = q.vertices[j];
    const auto t = f.layer_of(y);
    if (!t || *t > n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vertex " + std::to_string(y) + " has no layer below " +
                      std::to_string(n));
    }
    const auto& k = kernels[*t];
    const auto col = std::find(k.layer.begin(), k.layer.end(), y);
    if (col == k.layer.end()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "kernel " + std::to_string(*t) + " has no column for vertex " +
                      std::to_string(y));
    }
    const auto c = static_cast<std::size_t>(col - k.layer.begin());
    for (std::size_t i = 0; i < k.rows.size(); ++i) {
      q.values(i, j) = k.values(i, c);
    }
  }
  return q;
}

HadamardFamily::HadamardFamily(const OperatorFamily& ops) {
  for (std::size_t m = 0; m < ops.size(); ++m) {
    sqrt_.push_back(layer_sqrt(ops.at(m).boundary, m));
    kernels_.push_back(kernel_K(ops.at(m).poisson, sqrt_.back()));
  }
  for (std::size_t n = 0; n < ops.size(); ++n) {
    q_.push_back(hadamard_Q(ops.foliation(), kernels_, n));
  }
}

double sqrt_residual(const LayerSqrt& r, const BoundaryGreen& bg) {
  const auto square = r.values.matrix() * r.values.matrix();
  const double scale = bg.values.matrix().max_abs();
  const double diff = max_abs_diff(square, bg.values.matrix());
  return scale > 0.0 ? diff / scale : diff;
}

double hadamard_identity_residual(const HadamardMatrix& q,
                                  const GreenKernel& green) {
  const auto qqt = q.values * q.adjoint();
  const double scale = green.normalized.max_abs();
  const double diff = max_abs_diff(qqt, green.normalized);
  return scale > 0.0 ? diff / scale : diff;
}

Matrix dirichlet_gram(const Graph& g, const HadamardMatrix& q) {
  const std::size_t m = q.vertices.size();
  std::vector<EdgeField> grads;
  grads.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    VertexVector psi(g.vertex_count(), 0.0);
    for (std::size_t i = 0; i < m; ++i) psi[q.vertices[i]] = q.values(i, j);
    grads.push_back(coboundary(g, psi));
  }
  Matrix gram(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      gram(a, b) = edge_inner(grads[a], grads[b]);
      gram(b, a) = gram(a, b);
    }
  }
  return gram;
}

double isometry_residual(const Graph& g, const HadamardMatrix& q) {
  return max_abs_diff(dirichlet_gram(g, q),
                      Matrix::identity(q.vertices.size()));
}

double triangularity_violation(const Foliation& f, const HadamardMatrix& q) {
  double worst = 0.0;
  for (std::size_t j = 0; j < q.vertices.size(); ++j) {
    const auto t = f.layer_of(q.vertices[j]).value_or(0);
    for (std::size_t i = 0; i < q.vertices.size(); ++i) {
      const auto ti = f.layer_of(q.vertices[i]).value_or(0);
      if (ti > t) worst = std::max(worst, std::abs(q.values(i, j)));
    }
  }
  return worst;
}

double kernel_harmonic_residual(const Graph& g, const HadamardKernel& k) {
  const auto row_pos = positions(g.vertex_count(), k.rows);
  const auto in_layer = membership(g.vertex_count(), k.layer);
  double pi_max = 0.0;
  for (const auto x : k.rows) pi_max = std::max(pi_max, g.pi(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < k.rows.size(); ++i) {
    const VertexIndex x = k.rows[i];
    if (in_layer[x]) continue;
    for (std::size_t c = 0; c < k.layer.size(); ++c) {
      double lap = g.pi(x) * k.values(i, c);
      for (const auto& nb : g.neighbors(x)) {
        const auto j = row_pos[nb.vertex];
        if (j >= 0) {
          lap -= g.edges()[nb.edge].conductance *
                 k.values(static_cast<std::size_t>(j), c);
        }
      }
      worst = std::max(worst, std::abs(lap) / pi_max);
    }
  }
  return worst;
}

std::vector<double> solve_layered(const HadamardFamily& h, std::size_t n,
                                  std::span<const double> b) {
  const auto& q = h.q(n);
  if (b.size() != q.vertices.size()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  }
  std::vector<double> rest(b.begin(), b.end());
  std::vector<double> f(b.size(), 0.0);
  for (std::size_t m = n + 1; m-- > 0;) {
    const auto& k = h.kernel(m);
    const std::size_t width = k.layer.size();
    const std::size_t offset = k.rows.size() - width;
    std::vector<double> top(rest.begin() + static_cast<std::ptrdiff_t>(offset),
                            rest.begin() + static_cast<std::ptrdiff_t>(offset + width));
    const auto coeff = CholeskyFactor(h.sqrt(m).values).solve(top);
    for (std::size_t c = 0; c < width; ++c) {
      f[offset + c] = coeff[c];
      for (std::size_t i = 0; i < k.rows.size(); ++i) {
        rest[i] -= k.values(i, c) * coeff[c];
      }
    }
  }
  return f;
}

}  // namespace dgff
