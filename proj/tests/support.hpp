#pragma once

#include <random>

#include <oscbus/linalg.hpp>
#include <oscbus/symplectic.hpp>

namespace oscbus::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = g(rng);
  }
  return m;
}

/// A·Aᵀ + shift·I: positive definite with a controlled floor.
inline Matrix random_positive_definite(std::mt19937_64& rng, int dim, double shift = 0.5) {
  const Matrix a = random_matrix(rng, dim, dim);
  return a * a.transpose() / dim + shift * Matrix::Identity(dim, dim);
}

/// exp(J·K) with K symmetric is symplectic.
inline Matrix random_symplectic(std::mt19937_64& rng, int n, double scale = 0.3) {
  const Matrix k = random_matrix(rng, 2 * n, 2 * n);
  const Matrix sym = scale * (k + k.transpose()) / 2.0;
  return linalg::expm(symplectic_form(n) * sym);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oscbus::testing
