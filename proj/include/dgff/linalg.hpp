#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dgff {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;

  /// Largest |entry|; zero for an empty matrix.
  double max_abs() const noexcept;
  double frobenius() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
Matrix transpose(const Matrix& a);

/// max_ij |a_ij - b_ij|. Throws DimensionMismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Square matrix whose symmetry holds bit for bit: every write goes to both
/// (i,j) and (j,i).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : m_(n, n) {}

  /// Upper triangle of `a` mirrored into the lower one.
  static SymMatrix from_upper(const Matrix& a);
  /// (a + a^T) / 2.
  static SymMatrix symmetrized(const Matrix& a);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double value) {
    m_(i, j) = value;
    m_(j, i) = value;
  }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Eigenvalues ascending; eigenvector k is column k of `vectors`, with its
/// largest-magnitude component made positive.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic-by-row Jacobi rotations until the off-diagonal Frobenius mass is at
/// most tol * ||A||_F. Throws NoConvergence after `max_sweeps`.
EigenDecomposition jacobi_eigen(const SymMatrix& a, double tol = 1e-12,
                                int max_sweeps = 100);

/// Symmetric nonnegative square root. Eigenvalues within 1e-8 * ||A||_2 below
/// zero are clamped; anything more negative throws NotPSD.
SymMatrix psd_sqrt(const SymMatrix& a);

/// Reusable Cholesky factor A = L L^T.
class CholeskyFactor {
 public:
  /// Throws NotPD on a nonpositive pivot.
  explicit CholeskyFactor(const SymMatrix& a);

  const Matrix& lower() const noexcept { return l_; }
  std::size_t dim() const noexcept { return l_.rows(); }

  std::vector<double> solve(std::span<const double> b) const;
  /// Column-by-column solve of A X = B.
  Matrix solve(const Matrix& b) const;

 private:
  Matrix l_;
};

/// Lower-triangular L with positive diagonal and L L^T = A.
Matrix cholesky(const SymMatrix& a);

std::vector<double> solve_spd(const SymMatrix& a, std::span<const double> b);

/// CSV with a header row of column labels and a leading label column; values
/// printed with 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels);

/// Shortest round-trip-safe rendering used by every CSV writer (%.17g).
std::string format_real(double value);

}  // namespace dgff
