#include "dgff/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgff/error.hpp"
#include "dgff/random.hpp"

namespace dgff {

namespace {

std::vector<double> gather(std::span<const double> full, const VertexSet& order) {
  std::vector<double> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = full[order[i]];
  return out;
}

void check_support(std::span<const double> f, const VertexSet& support,
                   std::size_t vertex_count, const char* what) {
  if (f.size() != vertex_count) {
    throw Error(ErrorCode::DimensionMismatch, "test vector has wrong length");
  }
  const auto inside = membership(vertex_count, support);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!inside[v] && f[v] != 0.0) {
      throw Error(ErrorCode::SupportViolation,
                  std::string("test vector is nonzero outside ") + what);
    }
  }
}

/// Psi_k for k = 0..last, each over the full vertex range.
std::vector<VertexVector> grow_all(const HadamardFamily& h,
                                   const FieldSample& phi, std::size_t last) {
  std::vector<VertexVector> out;
  out.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    out.push_back(grow_dgff(h, phi, k).values);
  }
  return out;
}

double dot_on(std::span<const double> f, std::span<const double> g,
              const VertexSet& domain) {
  double s = 0.0;
  for (const auto v : domain) s += f[v] * g[v];
  return s;
}

}  // namespace

FieldSample sample_wnf(std::size_t vertex_count, const VertexSet& domain,
                       std::uint64_t seed, std::uint64_t trial) {
  FieldSample s{FieldKind::WhiteNoise, 0, VertexVector(vertex_count, 0.0), seed,
                trial};
  for (const auto y : domain) {
    s.values.at(y) = GaussianStream(seed, y).normal(trial);
  }
  return s;
}

FieldSample sample_wnf_in_basis(std::size_t vertex_count,
                                const VertexSet& domain, const Matrix& basis,
                                std::uint64_t seed, std::uint64_t trial) {
  if (basis.rows() != domain.size() || basis.cols() != domain.size()) {
    throw Error(ErrorCode::DimensionMismatch, "basis does not match domain");
  }
  std::vector<double> xi(domain.size());
  for (std::size_t k = 0; k < xi.size(); ++k) {
    xi[k] = GaussianStream(seed, kBasisSubstreamBase + k).normal(trial);
  }
  const auto local = basis * std::span<const double>(xi);
  FieldSample s{FieldKind::WhiteNoise, 0, VertexVector(vertex_count, 0.0), seed,
                trial};
  for (std::size_t i = 0; i < domain.size(); ++i) s.values.at(domain[i]) = local[i];
  return s;
}

Matrix random_orthogonal(std::size_t d, std::uint64_t seed) {
  const GaussianStream stream(seed, kBasisMatrixSubstream);
  SymMatrix a(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) a.set(i, j, stream.normal(i * d + j));
  }
  return jacobi_eigen(a).vectors;
}

FieldSample grow_dgff(const HadamardFamily& h, const FieldSample& phi,
                      std::size_t n) {
  const auto& q = h.q(n);
  const auto local = q.values * std::span<const double>(gather(phi.values, q.vertices));
  FieldSample out{FieldKind::Dgff, n, VertexVector(phi.values.size(), 0.0),
                  phi.seed, phi.trial};
  for (std::size_t i = 0; i < q.vertices.size(); ++i) {
    out.values[q.vertices[i]] = local[i];
  }
  return out;
}

FieldSample increment(const HadamardFamily& h, const FieldSample& phi,
                      std::size_t n) {
  auto out = grow_dgff(h, phi, n);
  out.kind = FieldKind::Increment;
  if (n == 0) return out;
  const auto before = grow_dgff(h, phi, n - 1);
  for (std::size_t v = 0; v < out.values.size(); ++v) {
    out.values[v] -= before.values[v];
  }
  return out;
}

VertexVector poisson_layer_noise(const OperatorFamily& ops,
                                 const HadamardFamily& h,
                                 const FieldSample& phi, std::size_t n) {
  const auto& p = ops.at(n).poisson;
  const auto weighted = h.sqrt(n).values.matrix() *
                        std::span<const double>(gather(phi.values, p.layer));
  const auto local = p.values * std::span<const double>(weighted);
  VertexVector out(phi.values.size(), 0.0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) out[p.rows[i]] = local[i];
  return out;
}

OracleSampler::OracleSampler(const GreenKernel& green)
    : vertices_(green.vertices),
      factor_(cholesky(SymMatrix::symmetrized(green.normalized))) {}

FieldSample OracleSampler::sample(std::size_t vertex_count, std::uint64_t seed,
                                  std::uint64_t trial) const {
  std::vector<double> z(vertices_.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = GaussianStream(seed, kOracleSubstreamBase + i).normal(trial);
  }
  const auto local = factor_ * std::span<const double>(z);
  FieldSample out{FieldKind::Dgff, 0, VertexVector(vertex_count, 0.0), seed, trial};
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    out.values.at(vertices_[i]) = local[i];
  }
  return out;
}

void MomentAccumulator::add(std::span<const double> x) {
  const std::size_t d = dim();
  if (x.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "sample has wrong dimension");
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = i; j < d; ++j) sum_(i, j) += xi * x[j];
  }
  ++count_;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "accumulators differ in dimension");
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = i; j < dim(); ++j) sum_(i, j) += other.sum_(i, j);
  }
  count_ += other.count_;
}

Matrix MomentAccumulator::covariance() const {
  Matrix c(dim(), dim());
  if (count_ == 0) return c;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = i; j < dim(); ++j) {
      c(i, j) = sum_(i, j) * inv;
      c(j, i) = c(i, j);
    }
  }
  return c;
}

double z_score(double empirical, double exact, double se) {
  const double diff = empirical - exact;
  if (se > 0.0) return diff / se;
  if (std::abs(diff) <= 1e-12) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

CovarianceReport covariance_report(const Matrix& empirical, const Matrix& exact,
                                   std::size_t samples, std::uint64_t seed) {
  if (empirical.rows() != exact.rows() || empirical.cols() != exact.cols() ||
      exact.rows() != exact.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "covariance shapes differ");
  }
  CovarianceReport r{empirical, exact, Matrix(exact.rows(), exact.cols()), 0.0,
                     samples, seed};
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < exact.rows(); ++i) {
    for (std::size_t j = 0; j < exact.cols(); ++j) {
      const double var = exact(i, i) * exact(j, j) + exact(i, j) * exact(i, j);
      const double se = std::sqrt(std::max(var, 0.0) / n);
      r.z(i, j) = z_score(empirical(i, j), exact(i, j), se);
      r.max_abs_z = std::max(r.max_abs_z, std::abs(r.z(i, j)));
    }
  }
  return r;
}

Matrix two_sample_z(const Matrix& a, std::size_t na, const Matrix& b,
                    std::size_t nb) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "covariance shapes differ");
  }
  Matrix z(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double va = (a(i, i) * a(j, j) + a(i, j) * a(i, j)) / static_cast<double>(na);
      const double vb = (b(i, i) * b(j, j) + b(i, j) * b(i, j)) / static_cast<double>(nb);
      z(i, j) = z_score(a(i, j), b(i, j), std::sqrt(std::max(va + vb, 0.0)));
    }
  }
  return z;
}

double max_abs_masked(const Matrix& z, const Matrix& mask) {
  double worst = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      if (mask(i, j) != 0.0) worst = std::max(worst, std::abs(z(i, j)));
    }
  }
  return worst;
}

CovarianceReport dgff_covariance(const HadamardFamily& h,
                                 const OperatorFamily& ops, std::size_t n,
                                 std::size_t trials, std::uint64_t seed) {
  const auto& domain = ops.at(ops.top()).cluster.vertices;
  const auto& cluster = ops.at(n).cluster.vertices;
  const std::size_t vc = ops.graph().vertex_count();
  MomentAccumulator acc(cluster.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto phi = sample_wnf(vc, domain, seed, t);
    acc.add(gather(grow_dgff(h, phi, n).values, cluster));
  }
  return covariance_report(acc.covariance(), ops.at(n).green.normalized, trials,
                           seed);
}

CovarianceReport oracle_covariance(const OperatorFamily& ops, std::size_t n,
                                   std::size_t trials, std::uint64_t seed) {
  const auto& green = ops.at(n).green;
  const OracleSampler oracle(green);
  const std::size_t vc = ops.graph().vertex_count();
  MomentAccumulator acc(green.vertices.size());
  for (std::size_t t = 0; t < trials; ++t) {
    acc.add(gather(oracle.sample(vc, seed, t).values, green.vertices));
  }
  return covariance_report(acc.covariance(), green.normalized, trials, seed);
}

IncrementReport increment_covariance(const HadamardFamily& h,
                                     const OperatorFamily& ops,
                                     std::size_t trials, std::uint64_t seed) {
  const std::size_t top = ops.top();
  const auto& domain = ops.at(top).cluster.vertices;
  const std::size_t vc = ops.graph().vertex_count();

  std::vector<std::size_t> offset(top + 2, 0);
  for (std::size_t k = 0; k <= top; ++k) {
    offset[k + 1] = offset[k] + ops.at(k).cluster.size();
  }
  const std::size_t dim = offset[top + 1];

  Matrix exact(dim, dim);
  Matrix cross_mask(dim, dim);
  for (std::size_t k = 0; k <= top; ++k) {
    const auto& kk = h.kernel(k).values;
    const auto block = kk * transpose(kk);
    for (std::size_t i = 0; i < block.rows(); ++i) {
      for (std::size_t j = 0; j < block.cols(); ++j) {
        exact(offset[k] + i, offset[k] + j) = block(i, j);
      }
    }
    for (std::size_t l = 0; l <= top; ++l) {
      if (l == k) continue;
      for (std::size_t i = offset[k]; i < offset[k + 1]; ++i) {
        for (std::size_t j = offset[l]; j < offset[l + 1]; ++j) cross_mask(i, j) = 1.0;
      }
    }
  }

  MomentAccumulator acc(dim);
  std::vector<double> stacked(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto phi = sample_wnf(vc, domain, seed, t);
    const auto psi = grow_all(h, phi, top);
    for (std::size_t k = 0; k <= top; ++k) {
      const auto& cluster = ops.at(k).cluster.vertices;
      for (std::size_t i = 0; i < cluster.size(); ++i) {
        const VertexIndex x = cluster[i];
        stacked[offset[k] + i] = k == 0 ? psi[0][x] : psi[k][x] - psi[k - 1][x];
      }
    }
    acc.add(stacked);
  }

  IncrementReport r;
  r.joint = covariance_report(acc.covariance(), exact, trials, seed);
  r.max_cross_z = max_abs_masked(r.joint.z, cross_mask);
  Matrix block_mask(dim, dim, 1.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (cross_mask(i, j) != 0.0) block_mask(i, j) = 0.0;
    }
  }
  r.max_block_z = max_abs_masked(r.joint.z, block_mask);
  return r;
}

BrownianReport brownian_targets(const HadamardFamily& h, const Foliation& f,
                                std::span<const double> test_vector) {
  const std::size_t top = h.size() - 1;
  check_support(test_vector, h.q(top).vertices, test_vector.size(),
                "the top cluster");
  BrownianReport r;
  r.f.assign(test_vector.begin(), test_vector.end());
  for (std::size_t n = 0; n <= top; ++n) {
    const auto& q = h.q(n);
    const auto adj = q.adjoint() *
                     std::span<const double>(gather(test_vector, q.vertices));
    double total = 0.0;
    std::vector<double> energy(n + 1, 0.0);
    for (std::size_t i = 0; i < q.vertices.size(); ++i) {
      total += adj[i] * adj[i];
      energy.at(f.layer_of(q.vertices[i]).value_or(0)) += adj[i] * adj[i];
    }
    double layered = 0.0;
    for (const double e : energy) layered += e;
    const double scale = std::max(total, std::numeric_limits<double>::min());
    r.pythagoras_residual =
        std::max(r.pythagoras_residual, total > 0.0 ? std::abs(layered - total) / scale
                                                    : std::abs(layered - total));
    if (!r.variance_targets.empty() && total < r.variance_targets.back()) {
      r.monotone = false;
    }
    r.variance_targets.push_back(total);
    r.layer_energy.push_back(std::move(energy));
  }
  return r;
}

BrownianReport brownian_check(const HadamardFamily& h, const Foliation& f,
                              std::span<const double> test_vector,
                              std::size_t trials, std::uint64_t seed) {
  auto r = brownian_targets(h, f, test_vector);
  const std::size_t top = h.size() - 1;
  const auto& domain = h.q(top).vertices;
  const std::size_t vc = test_vector.size();

  Matrix exact(top + 1, top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    for (std::size_t m = 0; m <= top; ++m) {
      exact(n, m) = r.variance_targets[std::min(n, m)];
    }
  }
  MomentAccumulator acc(top + 1);
  std::vector<double> values(top + 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto phi = sample_wnf(vc, domain, seed, t);
    const auto psi = grow_all(h, phi, top);
    for (std::size_t n = 0; n <= top; ++n) {
      values[n] = dot_on(test_vector, psi[n], h.q(n).vertices);
    }
    acc.add(values);
  }
  r.moments = covariance_report(acc.covariance(), exact, trials, seed);
  return r;
}

SweepReport sweep_average_check(const OperatorFamily& ops,
                                const HadamardFamily& h,
                                std::span<const double> test_vector,
                                std::size_t n1, std::size_t n2,
                                std::size_t trials, std::uint64_t seed) {
  const std::size_t top = ops.top();
  if (n1 > n2 || n2 > top) {
    throw Error(ErrorCode::IndexOutOfRange,
                "sweep range needs n1 <= n2 <= " + std::to_string(top));
  }
  check_support(test_vector, ops.at(n1).cluster.vertices,
                ops.graph().vertex_count(), "cluster n1");
  const auto targets = brownian_targets(h, ops.foliation(), test_vector);
  const auto& v = targets.variance_targets;
  auto before = [&](std::size_t n) { return n == 0 ? 0.0 : v[n - 1]; };

  SweepReport r;
  r.n1 = n1;
  r.n2 = n2;
  const std::size_t count = n2 - n1 + 1;
  Matrix exact(count, count);
  for (std::size_t a = 0; a < count; ++a) {
    r.variance_targets.push_back(v[n2] - before(n1 + a));
    for (std::size_t b = 0; b < count; ++b) {
      exact(a, b) = v[n2] - before(n1 + std::max(a, b));
    }
  }

  // Sweep P_n^* f, one vector over layer n per n.
  std::vector<std::vector<double>> swept;
  for (std::size_t n = n1; n <= n2; ++n) {
    const auto& p = ops.at(n).poisson;
    swept.push_back(transpose(p.values) *
                    std::span<const double>(gather(test_vector, p.rows)));
  }

  const auto& domain = ops.at(top).cluster.vertices;
  const std::size_t vc = ops.graph().vertex_count();
  MomentAccumulator acc(count);
  std::vector<double> averages(count);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto phi = sample_wnf(vc, domain, seed, t);
    const auto psi = grow_all(h, phi, n2);
    const double f_top = dot_on(test_vector, psi[n2], ops.at(n2).cluster.vertices);
    for (std::size_t a = 0; a < count; ++a) {
      const std::size_t n = n1 + a;
      const auto& layer = ops.at(n).poisson.layer;
      double avg = 0.0;
      for (std::size_t k = 0; k < layer.size(); ++k) avg += swept[a][k] * psi[n2][layer[k]];
      const double f_before =
          n == 0 ? 0.0 : dot_on(test_vector, psi[n - 1], ops.at(n - 1).cluster.vertices);
      const double telescoped = f_top - f_before;
      const double scale = std::max({1.0, std::abs(avg), std::abs(telescoped)});
      r.identity_residual =
          std::max(r.identity_residual, std::abs(avg - telescoped) / scale);
      averages[a] = avg;
    }
    acc.add(averages);
  }
  r.moments = covariance_report(acc.covariance(), exact, trials, seed);
  return r;
}

}  // namespace dgff
