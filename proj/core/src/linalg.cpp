#include "oscbus/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "oscbus/symplectic.hpp"

namespace oscbus::linalg {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Matrix doubled_diagonal(const Vector& s) {
  const Eigen::Index n = s.size();
  Vector d(2 * n);
  d << s, s;
  return d.asDiagonal();
}

Matrix expm(const Matrix& a) { return a.exp(); }

SymmetricRoots symmetric_roots(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition failed");
  }
  Vector ev = es.eigenvalues();
  const double floor = 1e-14 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Vector clamped = ev.cwiseMax(floor);
  const Matrix& u = es.eigenvectors();
  SymmetricRoots out;
  out.eigenvalues = ev;
  out.sqrt = u * clamped.cwiseSqrt().asDiagonal() * u.transpose();
  out.inv_sqrt = u * clamped.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  return out;
}

Vector uncertainty_eigenvalues(const Matrix& v, double hbar) {
  const int n = static_cast<int>(v.rows() / 2);
  CMatrix h = v.cast<Complex>() + Complex(0.0, 0.5 * hbar) * symplectic_form(n).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace oscbus::linalg
