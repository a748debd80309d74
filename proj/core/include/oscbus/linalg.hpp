#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oscbus {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Error hierarchy. Every failure raised by the library derives from Error so
// callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class UnsupportedTopology : public Error {
 public:
  using Error::Error;
};

class NoSteadyState : public Error {
 public:
  NoSteadyState(const std::string& what, std::vector<Complex> offending)
      : Error(what), offending_(std::move(offending)) {}
  const std::vector<Complex>& offending_eigenvalues() const { return offending_; }

 private:
  std::vector<Complex> offending_;
};

class StructuralViolation : public Error {
 public:
  StructuralViolation(const std::string& what, int mode_i, int mode_j)
      : Error(what), mode_i_(mode_i), mode_j_(mode_j) {}
  int mode_i() const { return mode_i_; }
  int mode_j() const { return mode_j_; }

 private:
  int mode_i_;
  int mode_j_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

namespace linalg {

double max_abs(const Matrix& m);
double max_abs(const CMatrix& m);

Matrix symmetrize(const Matrix& m);

// Block-diagonal direct sum a ⊕ b.
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Doubled-pair diagonal Diag(s_1..s_n, s_1..s_n).
Matrix doubled_diagonal(const Vector& s);

// exp(a) by scaling and squaring with a diagonal Padé approximant.
Matrix expm(const Matrix& a);

// Symmetric square root and inverse square root of a positive definite
// matrix; eigenvalues are clamped at 1e-14 * max before the root.
struct SymmetricRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
  Vector eigenvalues;
};
SymmetricRoots symmetric_roots(const Matrix& m);

// Hermitian eigenvalues of v + i*(hbar/2)*j.
Vector uncertainty_eigenvalues(const Matrix& v, double hbar);

}  // namespace linalg
}  // namespace oscbus
