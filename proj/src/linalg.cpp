#include "dgff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "dgff/error.hpp"

namespace dgff {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (const double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius() const noexcept {
  double s = 0.0;
  for (const double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).max_abs();
}

SymMatrix SymMatrix::from_upper(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  }
  SymMatrix s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) s.set(i, j, a(i, j));
  }
  return s;
}

SymMatrix SymMatrix::symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  }
  SymMatrix s(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    }
  }
  return s;
}

EigenDecomposition jacobi_eigen(const SymMatrix& input, double tol,
                                int max_sweeps) {
  const std::size_t n = input.dim();
  Matrix a = input.matrix();
  Matrix v = Matrix::identity(n);
  const double norm = a.frobenius();

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (norm > 0.0 && off_diagonal() > tol * norm) {
    if (sweep++ == max_sweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi iteration did not converge in " +
                      std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i) < a(j, j);
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(v(i, src)) > std::abs(v(lead, src))) lead = i;
    }
    const double sign = v(lead, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

SymMatrix psd_sqrt(const SymMatrix& a) {
  const std::size_t n = a.dim();
  const auto eig = jacobi_eigen(a);
  double spectral = 0.0;
  for (const double l : eig.values) spectral = std::max(spectral, std::abs(l));
  std::vector<double> root(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = eig.values[k];
    if (l < -1e-8 * spectral) {
      throw Error(ErrorCode::NotPSD,
                  "matrix has a negative eigenvalue " + format_real(l));
    }
    root[k] = l > 0.0 ? std::sqrt(l) : 0.0;
  }
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sum += eig.vectors(i, k) * root[k] * eig.vectors(j, k);
      }
      s.set(i, j, sum);
    }
  }
  return s;
}

CholeskyFactor::CholeskyFactor(const SymMatrix& a) : l_(a.dim(), a.dim()) {
  const std::size_t n = a.dim();
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l_(j, k) * l_(j, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw Error(ErrorCode::NotPD, "nonpositive Cholesky pivot at row " +
                                        std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l_(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / d;
    }
  }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  const std::size_t n = dim();
  if (b.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  }
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= l_(i, k) * x[k];
    x[i] /= l_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= l_(k, i) * x[k];
    x[i] /= l_(i, i);
  }
  return x;
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  Matrix x(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const auto col = solve(b.column(j));
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

Matrix cholesky(const SymMatrix& a) { return CholeskyFactor(a).lower(); }

std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b) {
  return CholeskyFactor(a).solve(b);
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Matrix& m,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels) {
  if (row_labels.size() != m.rows() || col_labels.size() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "CSV labels do not match shape");
  }
  for (const auto& label : col_labels) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << row_labels[i];
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << format_real(m(i, j));
    out << '\n';
  }
}

}  // namespace dgff
