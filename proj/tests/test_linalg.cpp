#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dgff/error.hpp"
#include "dgff/linalg.hpp"

namespace dgff {
namespace {

SymMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  SymMatrix a(rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) {
      if (j >= i) a.set(i, j, v);
      ++j;
    }
    ++i;
  }
  return a;
}

SymMatrix random_psd(std::size_t n, std::size_t rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix b(n, rank);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < rank; ++j) b(i, j) = normal(rng);
  }
  return SymMatrix::symmetrized(b * transpose(b));
}

TEST(Jacobi, IdentityHasUnitSpectrum) {
  const auto e = jacobi_eigen(SymMatrix::from_upper(Matrix::identity(3)));
  for (double v : e.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Jacobi, TwoByTwoLaplacian) {
  const auto e = jacobi_eigen(sym({{2, -1}, {-1, 2}}));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.vectors(0, 0), s, 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), s, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), s, 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), -e.vectors(1, 1), 1e-14);
}

TEST(Jacobi, DiagonalSortedAscending) {
  const auto e = jacobi_eigen(sym({{5, 0, 0}, {0, 2, 0}, {0, 0, 9}}));
  EXPECT_EQ(e.values, (std::vector<double>{2, 5, 9}));
}

TEST(Jacobi, ReconstructsRandomSymmetric) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 7u, 20u, 50u}) {
    const auto a = random_psd(n, n, rng);
    const auto e = jacobi_eigen(a);
    Matrix d(n, n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = e.values[k];
    const Matrix back = e.vectors * d * transpose(e.vectors);
    EXPECT_LE(max_abs_diff(back, a.matrix()), 1e-10 * a.matrix().max_abs()) << n;
    EXPECT_LE(max_abs_diff(transpose(e.vectors) * e.vectors, Matrix::identity(n)), 1e-12);
  }
}

TEST(PsdSqrt, Diagonal) {
  const auto r = psd_sqrt(sym({{4, 0}, {0, 9}}));
  EXPECT_NEAR(r(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-15);
  EXPECT_EQ(r(0, 1), 0.0);
}

TEST(PsdSqrt, Scalar) {
  SymMatrix a(1);
  a.set(0, 0, 2.0 / 3.0);
  EXPECT_NEAR(psd_sqrt(a)(0, 0), 0.816496580927726, 1e-15);
}

TEST(PsdSqrt, RankOne) {
  const auto r = psd_sqrt(sym({{1, 1}, {1, 1}}));
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(r(i, j), s, 1e-12);
  }
}

TEST(PsdSqrt, RejectsIndefinite) {
  try {
    psd_sqrt(sym({{1, 2}, {2, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(PsdSqrt, RandomRoundTripIncludingRankDeficient) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {3u, 10u, 25u, 50u}) {
    for (std::size_t rank : {n, n / 2 + 1}) {
      const auto a = random_psd(n, rank, rng);
      const auto r = psd_sqrt(a);
      EXPECT_EQ(max_abs_diff(r.matrix(), transpose(r.matrix())), 0.0);
      EXPECT_LE(max_abs_diff(r.matrix() * r.matrix(), a.matrix()),
                1e-10 * a.matrix().max_abs())
          << n << " rank " << rank;
      EXPECT_GE(jacobi_eigen(r).values.front(), -1e-8 * a.matrix().max_abs());
    }
  }
}

TEST(Cholesky, Identity) {
  EXPECT_EQ(max_abs_diff(cholesky(SymMatrix::from_upper(Matrix::identity(4))),
                         Matrix::identity(4)),
            0.0);
}

TEST(Cholesky, HandFactor) {
  const Matrix l = cholesky(sym({{4, 2}, {2, 5}}));
  EXPECT_DOUBLE_EQ(l(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(l(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(l(1, 1), 2.0);
}

TEST(Cholesky, IndefiniteIsNotPD) {
  try {
    cholesky(sym({{1, 2}, {2, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPD);
  }
}

TEST(SolveSpd, Cases) {
  const std::vector<double> b{3.0, -1.5, 0.25};
  EXPECT_EQ(solve_spd(SymMatrix::from_upper(Matrix::identity(3)), b), b);

  const auto x = solve_spd(sym({{2, -1}, {-1, 2}}), std::vector<double>{1, 0});
  EXPECT_NEAR(x[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0 / 3.0, 1e-15);

  const auto z = solve_spd(sym({{2, -1}, {-1, 2}}), std::vector<double>{0, 0});
  EXPECT_EQ(z, (std::vector<double>{0, 0}));
}

TEST(SolveSpd, RandomResidual) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (std::size_t n : {5u, 30u, 50u}) {
    auto a = random_psd(n, n + 5, rng);
    std::vector<double> b(n);
    for (auto& v : b) v = normal(rng);
    const auto x = solve_spd(a, b);
    const auto ax = a.matrix() * std::span<const double>(x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ax[i], b[i], 1e-8);
  }
}

TEST(MatrixOps, DimensionMismatch) {
  EXPECT_THROW(max_abs_diff(Matrix(2, 2), Matrix(2, 3)), Error);
}

TEST(FormatReal, RoundTrips) {
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_real(v)), v);
  EXPECT_EQ(format_real(0.5), "0.5");
}

}  // namespace
}  // namespace dgff
