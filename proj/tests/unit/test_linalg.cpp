#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace oscbus {
namespace {

using testing::max_abs_diff;

TEST(Expm, RotationGenerator) {
  for (double theta : {0.0, 0.3, 2.0, 17.5}) {
    Matrix gen(2, 2);
    gen << 0.0, theta, -theta, 0.0;
    Matrix expected(2, 2);
    expected << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    EXPECT_LT(max_abs_diff(linalg::expm(gen), expected), 1e-12) << "theta = " << theta;
  }
}

TEST(Expm, DiagonalAndNilpotent) {
  Vector d(3);
  d << -2.0, 0.0, 1.5;
  const Matrix e = linalg::expm(d.asDiagonal());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(e(k, k), std::exp(d(k)), 1e-13 * std::exp(std::abs(d(k))));

  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  Matrix expected = Matrix::Identity(3, 3) + n + 0.5 * n * n;
  EXPECT_LT(max_abs_diff(linalg::expm(n), expected), 1e-13);
}

TEST(Expm, GroupProperty) {
  std::mt19937_64 rng(11);
  const Matrix a = testing::random_matrix(rng, 5, 5);
  const Matrix once = linalg::expm(a);
  const Matrix half = linalg::expm(0.5 * a);
  EXPECT_LT(max_abs_diff(half * half, once), 1e-11 * once.cwiseAbs().maxCoeff());
  EXPECT_LT(max_abs_diff(linalg::expm(a) * linalg::expm(-a), Matrix::Identity(5, 5)), 1e-11);
}

TEST(SymmetricRoots, SquareAndInverse) {
  std::mt19937_64 rng(3);
  const Matrix m = testing::random_positive_definite(rng, 6);
  const auto roots = linalg::symmetric_roots(m);
  EXPECT_LT(max_abs_diff(roots.sqrt * roots.sqrt, m), 1e-12);
  EXPECT_LT(max_abs_diff(roots.inv_sqrt * roots.sqrt, Matrix::Identity(6, 6)), 1e-12);
  EXPECT_LT(max_abs_diff(roots.sqrt, roots.sqrt.transpose()), 1e-14);
}

TEST(SymmetricRoots, ReportsEigenvalues) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  const auto roots = linalg::symmetric_roots(m);
  EXPECT_NEAR(roots.eigenvalues.minCoeff(), -1.0, 1e-14);
  EXPECT_NEAR(roots.eigenvalues.maxCoeff(), 3.0, 1e-14);
}

TEST(DirectSum, BlockPlacement) {
  Matrix a(1, 1);
  a << 2.0;
  Matrix b(2, 2);
  b << 1.0, 3.0, 4.0, 5.0;
  const Matrix s = linalg::direct_sum(a, b);
  ASSERT_EQ(s.rows(), 3);
  EXPECT_EQ(s(0, 0), 2.0);
  EXPECT_EQ(s(1, 2), 3.0);
  EXPECT_EQ(s(2, 1), 4.0);
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_EQ(s(2, 0), 0.0);
}

TEST(DoubledDiagonal, RepeatsSpectrum) {
  Vector s(2);
  s << 1.0, 3.0;
  const Matrix d = linalg::doubled_diagonal(s);
  Vector expected(4);
  expected << 1.0, 3.0, 1.0, 3.0;
  EXPECT_EQ(Vector(d.diagonal()), expected);
  EXPECT_EQ(linalg::max_abs(Matrix(d - Matrix(d.diagonal().asDiagonal()))), 0.0);
}

TEST(UncertaintyEigenvalues, VacuumSaturates) {
  const double hbar = 1.0;
  const Matrix vacuum = 0.5 * hbar * Matrix::Identity(2, 2);
  const Vector ev = linalg::uncertainty_eigenvalues(vacuum, hbar);
  EXPECT_NEAR(ev.minCoeff(), 0.0, 1e-14);
  EXPECT_NEAR(ev.maxCoeff(), hbar, 1e-14);
  const Matrix too_narrow = 0.25 * hbar * Matrix::Identity(2, 2);
  EXPECT_LT(linalg::uncertainty_eigenvalues(too_narrow, hbar).minCoeff(), -0.2);
}

}  // namespace
}  // namespace oscbus
