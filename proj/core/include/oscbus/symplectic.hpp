#pragma once

#include <optional>
#include <vector>

#include "oscbus/linalg.hpp"

namespace oscbus {

/// Symmetric Hessian of a quadratic Hamiltonian H = ½ Xᵀ M X over the phase
/// space ordering (q_1 … q_n, p_1 … p_n).
///
/// Construction validates squareness, even dimension and symmetry (relative
/// tolerance 1e-12 of the largest entry); the stored matrix is exactly
/// symmetric afterwards.
class QuadraticForm {
 public:
  explicit QuadraticForm(Matrix m);

  int n_modes() const { return static_cast<int>(m_.rows() / 2); }
  int dimension() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  // n×n blocks of [[M_Q, M_C], [M_Cᵀ, M_P]].
  Matrix block_q() const;
  Matrix block_p() const;
  Matrix block_c() const;

 private:
  Matrix m_;
};

/// The 2n×2n fundamental form [[0, I], [−I, 0]].
Matrix symplectic_form(int n);

/// True iff ‖SᵀJS − J‖_max ≤ tol.
bool is_symplectic(const Matrix& s, double tol);

/// Symplectic normal form of a positive definite quadratic form:
/// S M Sᵀ = Diag(ς, ς) with S = Λ^{1/2} O M^{−1/2}.
struct WilliamsonDecomposition {
  Matrix S;
  Vector spectrum;  ///< ascending symplectic eigenvalues ς_1 ≤ … ≤ ς_n
  Matrix O;         ///< orthogonal factor

  int n_modes() const { return static_cast<int>(spectrum.size()); }
  Matrix normal_form() const { return linalg::doubled_diagonal(spectrum); }
};

WilliamsonDecomposition williamson(const QuadraticForm& m);

/// Moduli of the imaginary eigenvalues of J·M, ascending. Computed from a
/// general (non-Hermitian) eigensolver, independently of williamson().
Vector symplectic_spectrum(const QuadraticForm& m);

/// Outcome of testing whether a symplectic rotation R and a positive diagonal
/// L exist with R M Rᵀ = L Λ L. The two residuals are the max-norms of
///   [M_Q, M_P] − (M_C² − M_Cᵀ²)   and
///   (M_P M_C − M_Cᵀ M_P) − (M_C M_Q − M_Q M_Cᵀ).
struct NormalFormReport {
  bool conditions_hold = false;
  Vector L;                 ///< l_1 … l_n (empty when R could not be built)
  std::optional<Matrix> R;  ///< symplectic orthogonal, when constructible
  double commutator_residual = 0.0;
  double cross_residual = 0.0;
};

NormalFormReport check_normal_form_conditions(const QuadraticForm& m);

/// Partition of mode indices (0-based) into groups of (near-)equal symplectic
/// eigenvalues.
struct ModeGrouping {
  std::vector<std::vector<int>> groups;
  double tolerance = 0.0;

  /// Index into `groups` of the group holding `mode`; -1 if absent.
  int group_of(int mode) const;
};

/// Groups an ascending spectrum; a new group starts whenever consecutive
/// values differ by more than `tol`. Default tol = 1e-9 · max(spectrum).
ModeGrouping group_degenerate_modes(const Vector& spectrum, std::optional<double> tol = {});

namespace detail {
void require_positive_definite(const Matrix& m);
}

}  // namespace oscbus
