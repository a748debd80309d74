#include "oscbus/gaussian.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace oscbus {

namespace {

constexpr double kConditioningLimit = 1e4;
constexpr double kLocalityTol = 1e-10;

void require_square(const Matrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << " must be " << dim << "x" << dim << ", got " << m.rows() << "x" << m.cols();
    throw InvalidDimension(os.str());
  }
}

}  // namespace

void CovarianceState::validate(double hbar) const {
  if (V.rows() != V.cols() || V.rows() % 2 != 0 || V.rows() == 0) {
    throw InvalidDimension("covariance matrix must be square with even dimension");
  }
  if (mean.size() != V.rows()) throw InvalidDimension("mean vector does not match the covariance");
  const double scale = std::max(1.0, linalg::max_abs(V));
  if (linalg::max_abs(Matrix(V - V.transpose())) > 1e-12 * scale) {
    throw InvalidState("covariance matrix is not symmetric");
  }
  const double low = linalg::uncertainty_eigenvalues(V, hbar).minCoeff();
  if (low < -1e-10 * scale) {
    std::ostringstream os;
    os << "covariance matrix violates the uncertainty relation (eigenvalue " << low << ")";
    throw InvalidState(os.str());
  }
}

NoiseModel NoiseModel::from_lambdas(std::vector<CVector> lambdas, double hbar) {
  if (lambdas.empty()) throw InvalidArgument("noise model needs at least one Lindblad vector");
  const Eigen::Index dim = lambdas.front().size();
  NoiseModel out;
  out.upsilon = CMatrix::Zero(dim, dim);
  for (const auto& l : lambdas) {
    if (l.size() != dim) throw InvalidDimension("Lindblad vectors differ in dimension");
    out.upsilon += l * l.adjoint();
  }
  out.upsilon = 0.5 * (out.upsilon + out.upsilon.adjoint()).eval();
  out.lambdas = std::move(lambdas);
  out.hbar = hbar;
  return out;
}

NoiseModel thermal_bath_noise(int n_oscillators, double zeta, double n_th, double hbar) {
  if (n_oscillators < 1) throw InvalidDimension("thermal baths need at least one oscillator");
  if (zeta < 0.0) throw InvalidArgument("bath rate zeta must be >= 0");
  if (n_th < 0.0) throw InvalidArgument("bath occupation n_th must be >= 0");
  const int n = n_oscillators;
  const Complex i(0.0, 1.0);
  const double down = std::sqrt(zeta * (n_th + 1.0) / 2.0);
  const double up = std::sqrt(zeta * n_th / 2.0);
  std::vector<CVector> lambdas;
  lambdas.reserve(2 * n);
  for (int k = 0; k < n; ++k) {
    CVector annihilate = CVector::Zero(2 * n);
    annihilate(k) = i * down;
    annihilate(k + n) = -down;
    CVector create = CVector::Zero(2 * n);
    create(k) = -i * up;
    create(k + n) = -up;
    lambdas.push_back(std::move(annihilate));
    lambdas.push_back(std::move(create));
  }
  NoiseModel out = NoiseModel::from_lambdas(std::move(lambdas), hbar);
  out.bath = ThermalBath{zeta, n_th};
  return out;
}

NoiseModel thermal_bath_noise(const SystemSpec& spec, double zeta, double n_th) {
  return thermal_bath_noise(spec.n_total(), zeta, n_th, spec.hbar);
}

DriftDiffusion drift_and_diffusion(const QuadraticForm& h, const NoiseModel& noise) {
  if (noise.dimension() != h.dimension()) {
    throw InvalidDimension("noise model dimension " + std::to_string(noise.dimension()) +
                           " does not match Hessian dimension " + std::to_string(h.dimension()));
  }
  const Matrix j = symplectic_form(h.n_modes());
  DriftDiffusion out;
  out.drift = j * h.matrix() - Matrix(noise.upsilon.imag()) * j;
  out.diffusion = noise.hbar * linalg::symmetrize(noise.upsilon.real());
  return out;
}

PropagationResult propagate_cm(const Matrix& drift, const Matrix& diffusion,
                               const CovarianceState& v0, std::span<const double> times) {
  const Eigen::Index dim = v0.V.rows();
  require_square(drift, dim, "drift");
  require_square(diffusion, dim, "diffusion");
  if (v0.mean.size() != dim) throw InvalidDimension("mean vector does not match the covariance");
  double previous = v0.t;
  double max_step = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < previous) {
      throw InvalidArgument("propagation times must be finite, sorted and not before the initial state");
    }
    max_step = std::max(max_step, t - previous);
    previous = t;
  }

  PropagationResult out;
  const double drift_norm = drift.cwiseAbs().rowwise().sum().maxCoeff();
  if (drift_norm * max_step > kConditioningLimit) {
    std::ostringstream os;
    os << "propagation step is poorly conditioned: |drift| * step = " << drift_norm * max_step;
    out.warnings.push_back(os.str());
  }

  // Augmented generator [[Γ, D], [0, −Γᵀ]]; its exponential holds e^{ΓΔ}
  // and the diffusion integral in the top row.
  Matrix generator = Matrix::Zero(2 * dim, 2 * dim);
  generator.topLeftCorner(dim, dim) = drift;
  generator.topRightCorner(dim, dim) = diffusion;
  generator.bottomRightCorner(dim, dim) = -drift.transpose();

  std::map<std::uint64_t, std::pair<Matrix, Matrix>> cache;
  CovarianceState state = v0;
  out.times.reserve(times.size());
  out.states.reserve(times.size());
  for (double t : times) {
    const double step = t - state.t;
    if (step > 0.0) {
      auto [it, inserted] = cache.try_emplace(std::bit_cast<std::uint64_t>(step));
      if (inserted) {
        const Matrix big = linalg::expm(generator * step);
        Matrix f = big.topLeftCorner(dim, dim);
        Matrix w = linalg::symmetrize(big.topRightCorner(dim, dim) * f.transpose());
        it->second = {std::move(f), std::move(w)};
      }
      const auto& [f, w] = it->second;
      state.V = linalg::symmetrize(f * state.V * f.transpose() + w);
      state.mean = f * state.mean;
    }
    state.t = t;
    out.times.push_back(t);
    out.states.push_back(state);
  }
  return out;
}

CovarianceState steady_state(const Matrix& drift, const Matrix& diffusion) {
  const Eigen::Index n = drift.rows();
  require_square(drift, n, "drift");
  require_square(diffusion, n, "diffusion");

  Eigen::ComplexSchur<CMatrix> schur(drift.cast<Complex>());
  if (schur.info() != Eigen::Success) throw Error("steady_state: Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();

  const double threshold = -1e-12 * std::max(linalg::max_abs(drift), 1e-300);
  std::vector<Complex> offending;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (t(k, k).real() >= threshold) offending.push_back(t(k, k));
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "drift is not Hurwitz: " << offending.size() << " eigenvalue(s) with Re >= 0, e.g. "
       << offending.front();
    throw NoSteadyState(os.str(), offending);
  }

  // T Y + Y Tᴴ = −C with C = Uᴴ D U; Tᴴ is lower triangular, so columns
  // resolve from the last one backwards.
  const CMatrix c = u.adjoint() * diffusion.cast<Complex>() * u;
  CMatrix y = CMatrix::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    CVector rhs = -c.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    CMatrix shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }

  CovarianceState out;
  out.V = linalg::symmetrize((u * y * u.adjoint()).real());
  out.mean = Vector::Zero(n);
  out.t = std::numeric_limits<double>::infinity();
  return out;
}

namespace detail {

Matrix symplectic_inverse(const Matrix& s) {
  const Matrix j = symplectic_form(static_cast<int>(s.rows() / 2));
  return -j * s.transpose() * j;
}

}  // namespace detail

NoiseModel transform_noise_to_modes(const NoiseModel& noise, const Matrix& s0) {
  if (s0.rows() != noise.dimension() || s0.cols() != noise.dimension()) {
    throw InvalidDimension("symplectic transform does not match the noise dimension");
  }
  const double scale = std::max(1.0, linalg::max_abs(s0));
  if (!is_symplectic(s0, 1e-10 * scale * scale)) {
    throw InvalidArgument("transform_noise_to_modes: S0 is not symplectic");
  }
  const Matrix inv = detail::symplectic_inverse(s0);
  const CMatrix inv_t = inv.transpose().cast<Complex>();
  NoiseModel out;
  out.lambdas.reserve(noise.lambdas.size());
  for (const auto& l : noise.lambdas) out.lambdas.push_back(inv_t * l);
  const CMatrix upsilon = inv_t * noise.upsilon * inv.cast<Complex>();
  out.upsilon = 0.5 * (upsilon + upsilon.adjoint());
  out.bath = noise.bath;
  out.hbar = noise.hbar;
  return out;
}

const char* to_string(BathKind kind) {
  switch (kind) {
    case BathKind::thermal_local: return "thermal_local";
    case BathKind::squeezed_local: return "squeezed_local";
    case BathKind::nonlocal: return "nonlocal";
  }
  return "unknown";
}

std::vector<ModeBath> classify_mode_baths(const NoiseModel& noise, const Matrix& s0) {
  const NoiseModel modes = transform_noise_to_modes(noise, s0);
  const int n = modes.dimension() / 2;
  const CMatrix& u = modes.upsilon;
  const double tol = kLocalityTol * std::max(1.0, linalg::max_abs(u));

  double norm = 1.0;
  if (modes.bath && modes.bath->zeta * (modes.bath->n_th + 0.5) > 0.0) {
    norm = modes.bath->zeta * (modes.bath->n_th + 0.5);
  }

  std::vector<ModeBath> out(n);
  for (int k = 0; k < n; ++k) {
    ModeBath& mb = out[k];
    const int rows[2] = {k, k + n};
    for (int j = 0; j < n && mb.partner < 0; ++j) {
      if (j == k) continue;
      const int cols[2] = {j, j + n};
      for (int r : rows) {
        for (int c : cols) {
          if (std::abs(u(r, c)) > tol) mb.partner = j;
        }
      }
    }
    const double qq = u(k, k).real();
    const double pp = u(k + n, k + n).real();
    const double qp = u(k, k + n).real();
    mb.q_weight = qq / norm;
    mb.p_weight = pp / norm;
    if (mb.partner >= 0 || std::abs(qp) > tol) {
      mb.kind = BathKind::nonlocal;
      if (mb.partner < 0) mb.partner = k;
    } else if (std::abs(qq - pp) <= tol) {
      mb.kind = BathKind::thermal_local;
    } else {
      mb.kind = BathKind::squeezed_local;
    }
  }
  return out;
}

}  // namespace oscbus
