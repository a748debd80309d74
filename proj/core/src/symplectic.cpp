#include "oscbus/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oscbus {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPositiveDefiniteTol = 1e-12;
constexpr double kDegeneracyTol = 1e-9;
constexpr double kPhaseSignificance = 1e-6;

// Lexicographic ">" on absolute component vectors, with a small tolerance so
// rounding noise does not flip the order of numerically equal entries.
bool abs_lex_greater(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = std::abs(a(i));
    const double y = std::abs(b(i));
    if (std::abs(x - y) > 1e-10) return x > y;
  }
  return false;
}

// Deterministic orthonormal basis of the complex eigenspace spanned by the
// columns of `basis`: pivoted Gram-Schmidt on the projections of the
// standard basis vectors, phase fixed so that the first significant
// component is positive imaginary, then sorted by absolute components.
std::vector<CVector> canonical_basis(const CMatrix& basis) {
  const Eigen::Index dim = basis.rows();
  const Eigen::Index d = basis.cols();
  const CMatrix projector = basis * basis.adjoint();

  std::vector<CVector> chosen;
  for (Eigen::Index step = 0; step < d; ++step) {
    std::vector<CVector> residuals(static_cast<size_t>(dim));
    std::vector<double> norms(static_cast<size_t>(dim));
    double best = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      CVector w = projector.col(j);
      for (const auto& u : chosen) w -= u * u.dot(w);
      norms[j] = w.norm();
      residuals[j] = std::move(w);
      best = std::max(best, norms[j]);
    }
    Eigen::Index pivot = 0;
    while (norms[pivot] < best * (1.0 - 1e-9)) ++pivot;
    chosen.push_back(residuals[pivot] / norms[pivot]);
  }

  for (auto& u : chosen) {
    const double peak = u.cwiseAbs().maxCoeff();
    Eigen::Index first = 0;
    while (std::abs(u(first)) < kPhaseSignificance * peak) ++first;
    const Complex phase = u(first) / std::abs(u(first));
    u *= Complex(0.0, 1.0) * std::conj(phase);
  }
  std::stable_sort(chosen.begin(), chosen.end(), abs_lex_greater);
  return chosen;
}

}  // namespace

QuadraticForm::QuadraticForm(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw InvalidDimension("quadratic form must be a non-empty square matrix");
  }
  if (m_.rows() % 2 != 0) {
    throw InvalidDimension("quadratic form must have even dimension, got " +
                           std::to_string(m_.rows()));
  }
  if (!m_.allFinite()) throw InvalidInput("quadratic form has non-finite entries");
  const double scale = std::max(linalg::max_abs(m_), 1e-300);
  const double asym = linalg::max_abs(Matrix(m_ - m_.transpose()));
  if (asym > kSymmetryTol * scale) {
    std::ostringstream os;
    os << "quadratic form is not symmetric (max |M - Mᵀ| = " << asym << ")";
    throw InvalidInput(os.str());
  }
  m_ = linalg::symmetrize(m_);
}

Matrix QuadraticForm::block_q() const {
  const int n = n_modes();
  return m_.topLeftCorner(n, n);
}

Matrix QuadraticForm::block_p() const {
  const int n = n_modes();
  return m_.bottomRightCorner(n, n);
}

Matrix QuadraticForm::block_c() const {
  const int n = n_modes();
  return m_.topRightCorner(n, n);
}

Matrix symplectic_form(int n) {
  if (n < 1) throw InvalidDimension("symplectic form needs n >= 1, got " + std::to_string(n));
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

bool is_symplectic(const Matrix& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw InvalidDimension("is_symplectic needs a square matrix of even dimension");
  }
  const Matrix j = symplectic_form(static_cast<int>(s.rows() / 2));
  return linalg::max_abs(Matrix(s.transpose() * j * s - j)) <= tol;
}

namespace detail {

void require_positive_definite(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  const double low = ev.minCoeff();
  if (!(top > 0.0) || low <= kPositiveDefiniteTol * top) {
    std::ostringstream os;
    os << "matrix is not positive definite (smallest eigenvalue " << low << ")";
    throw NotPositiveDefinite(os.str(), low);
  }
}

}  // namespace detail

WilliamsonDecomposition williamson(const QuadraticForm& form) {
  const Matrix& m = form.matrix();
  const int n = form.n_modes();
  detail::require_positive_definite(m);

  const auto roots = linalg::symmetric_roots(m);
  Matrix k = roots.sqrt * symplectic_form(n) * roots.sqrt;
  k = 0.5 * (k - k.transpose());

  // iK is Hermitian with eigenvalues ±ς_k; the upper half carries the
  // eigenvectors u with K u = −iς u.
  const CMatrix ik = Complex(0.0, 1.0) * k.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(ik);
  if (es.info() != Eigen::Success) throw Error("williamson: eigensolver failed");
  const Vector spectrum = es.eigenvalues().tail(n);
  const CMatrix upper = es.eigenvectors().rightCols(n);

  const double tol = kDegeneracyTol * spectrum.maxCoeff();
  Matrix o(2 * n, 2 * n);
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && spectrum(stop) - spectrum(stop - 1) <= tol) ++stop;
    const auto basis = canonical_basis(upper.middleCols(start, stop - start));
    for (int i = 0; i < stop - start; ++i) {
      o.row(start + i) = std::sqrt(2.0) * basis[i].imag().transpose();
      o.row(n + start + i) = std::sqrt(2.0) * basis[i].real().transpose();
    }
    start = stop;
  }

  Vector root_s(2 * n);
  root_s << spectrum.cwiseSqrt(), spectrum.cwiseSqrt();

  WilliamsonDecomposition out;
  out.spectrum = spectrum;
  out.O = o;
  out.S = root_s.asDiagonal() * o * roots.inv_sqrt;
  return out;
}

Vector symplectic_spectrum(const QuadraticForm& form) {
  const int n = form.n_modes();
  detail::require_positive_definite(form.matrix());
  Eigen::EigenSolver<Matrix> es(symplectic_form(n) * form.matrix(), false);
  if (es.info() != Eigen::Success) throw Error("symplectic_spectrum: eigensolver failed");
  std::vector<double> moduli;
  moduli.reserve(2 * n);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    moduli.push_back(std::abs(es.eigenvalues()(i).imag()));
  }
  std::sort(moduli.begin(), moduli.end());
  Vector out(n);
  for (int k = 0; k < n; ++k) out(k) = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  return out;
}

namespace {

// Builds R row by row from simultaneous eigenvectors of M and JᵀMJ (which
// commute exactly when the normal form conditions hold).
std::optional<std::pair<Matrix, Vector>> build_rotation(const Matrix& m) {
  const int n = static_cast<int>(m.rows() / 2);
  const Matrix j = symplectic_form(n);
  const Matrix mirrored = j.transpose() * m * j;
  const double mix = 0.6180339887498949;
  Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrize(m + mix * mirrored));
  if (es.info() != Eigen::Success) return std::nullopt;

  std::vector<Vector> rows;
  for (Eigen::Index c = 0; c < es.eigenvectors().cols() && static_cast<int>(rows.size()) < n; ++c) {
    Vector w = es.eigenvectors().col(c);
    for (const auto& r : rows) {
      w -= r * r.dot(w);
      const Vector partner = j.transpose() * r;
      w -= partner * partner.dot(w);
    }
    const double norm = w.norm();
    if (norm > 0.5) rows.push_back(w / norm);
  }
  if (static_cast<int>(rows.size()) != n) return std::nullopt;

  Matrix r(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    r.row(k) = rows[k].transpose();
    r.row(k + n) = (j.transpose() * rows[k]).transpose();
  }
  const Matrix d = r * m * r.transpose();
  Vector s(n), l(n);
  for (int k = 0; k < n; ++k) {
    const double lam = d(k, k);
    const double mu = d(k + n, k + n);
    if (lam <= 0.0 || mu <= 0.0) return std::nullopt;
    s(k) = std::sqrt(lam * mu);
    l(k) = std::pow(lam / mu, 0.25);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s(a) < s(b); });
  Matrix sorted(2 * n, 2 * n);
  Vector sorted_l(n);
  Vector sorted_s(n);
  for (int k = 0; k < n; ++k) {
    sorted.row(k) = r.row(order[k]);
    sorted.row(k + n) = r.row(order[k] + n);
    sorted_l(k) = l(order[k]);
    sorted_s(k) = s(order[k]);
  }

  Vector ll(2 * n);
  ll << sorted_l, sorted_l.cwiseInverse();
  const Matrix target = ll.asDiagonal() * linalg::doubled_diagonal(sorted_s) * ll.asDiagonal();
  const double scale = linalg::max_abs(m);
  if (linalg::max_abs(Matrix(sorted * m * sorted.transpose() - target)) > 1e-8 * scale) {
    return std::nullopt;
  }
  if (!is_symplectic(sorted, 1e-10)) return std::nullopt;
  return std::make_pair(sorted, sorted_l);
}

}  // namespace

NormalFormReport check_normal_form_conditions(const QuadraticForm& form) {
  const Matrix mq = form.block_q();
  const Matrix mp = form.block_p();
  const Matrix mc = form.block_c();
  const Matrix mct = mc.transpose();

  NormalFormReport report;
  report.commutator_residual =
      linalg::max_abs(Matrix((mq * mp - mp * mq) - (mc * mc - mct * mct)));
  report.cross_residual =
      linalg::max_abs(Matrix((mp * mc - mct * mp) - (mc * mq - mq * mct)));
  const double bound = 1e-10 * linalg::max_abs(form.matrix());
  report.conditions_hold = report.commutator_residual <= bound && report.cross_residual <= bound;

  if (report.conditions_hold) {
    bool positive = true;
    try {
      detail::require_positive_definite(form.matrix());
    } catch (const NotPositiveDefinite&) {
      positive = false;
    }
    if (positive) {
      if (auto built = build_rotation(form.matrix())) {
        report.R = std::move(built->first);
        report.L = std::move(built->second);
      }
    }
  }
  return report;
}

int ModeGrouping::group_of(int mode) const {
  for (size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), mode) != groups[g].end()) {
      return static_cast<int>(g);
    }
  }
  return -1;
}

ModeGrouping group_degenerate_modes(const Vector& spectrum, std::optional<double> tol) {
  ModeGrouping out;
  if (spectrum.size() == 0) return out;
  for (Eigen::Index i = 1; i < spectrum.size(); ++i) {
    if (spectrum(i) < spectrum(i - 1)) {
      throw InvalidArgument("group_degenerate_modes: spectrum must be ascending");
    }
  }
  const double t = tol.value_or(kDegeneracyTol * spectrum.cwiseAbs().maxCoeff());
  if (t < 0.0) throw InvalidArgument("group_degenerate_modes: tolerance must be >= 0");
  out.tolerance = t;
  out.groups.push_back({0});
  for (Eigen::Index i = 1; i < spectrum.size(); ++i) {
    if (spectrum(i) - spectrum(i - 1) > t) out.groups.emplace_back();
    out.groups.back().push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace oscbus
