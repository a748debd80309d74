#include "oscbus/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace oscbus {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

// Sorts the modes of a network symplectic (and its orthogonal factor) by
// ascending frequency, moving rows k and k+N together.
WilliamsonDecomposition sorted_modes(const Matrix& s, const Matrix& o, const Vector& spectrum) {
  const int n = static_cast<int>(spectrum.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return spectrum(x) < spectrum(y); });
  WilliamsonDecomposition out;
  out.S.resize(2 * n, 2 * n);
  out.O.resize(2 * n, 2 * n);
  out.spectrum.resize(n);
  for (int k = 0; k < n; ++k) {
    out.S.row(k) = s.row(order[k]);
    out.S.row(k + n) = s.row(order[k] + n);
    out.O.row(k) = o.row(order[k]);
    out.O.row(k + n) = o.row(order[k] + n);
    out.spectrum(k) = spectrum(order[k]);
  }
  return out;
}

// S = 𝑺Ô ⊕ 𝑺⁻¹Ô for a network with H_N = Q ⊕ ωI and Q = Ôᵀ diag(h) Ô.
WilliamsonDecomposition position_coupled(const Matrix& o_hat, const Vector& h, double omega) {
  const int n = static_cast<int>(h.size());
  Vector scale(n);
  Vector spectrum(n);
  for (int k = 0; k < n; ++k) {
    scale(k) = std::pow(omega / h(k), 0.25);
    spectrum(k) = std::sqrt(omega * h(k));
  }
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = scale.asDiagonal() * o_hat;
  s.bottomRightCorner(n, n) = scale.cwiseInverse().asDiagonal() * o_hat;
  return sorted_modes(s, linalg::direct_sum(o_hat, o_hat), spectrum);
}

Matrix chain_modes(int n) {
  Matrix o(n, n);
  for (int j = 0; j < n; ++j) {
    const double norm = std::sqrt((j == 0 ? 1.0 : 2.0) / n);
    for (int k = 0; k < n; ++k) {
      o(j, k) = norm * std::cos(j * (2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    }
  }
  return o;
}

Matrix triangle_modes() {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double r6 = std::sqrt(6.0);
  Matrix o(3, 3);
  o << 1 / r3, 1 / r3, 1 / r3,
       0.0, -1 / r2, 1 / r2,
       -2 / r6, 1 / r6, 1 / r6;
  return o;
}

// Eigenbasis of the momentum-position cross block; row k has eigenvalue
// γ+κ, γ−κ, γ respectively.
Matrix momentum_modes() {
  const double r2 = std::sqrt(2.0);
  Matrix o(3, 3);
  o << 0.5, -1 / r2, 0.5,
       0.5, 1 / r2, 0.5,
       -1 / r2, 0.0, 1 / r2;
  return o;
}

}  // namespace

std::string to_string(Topology t) {
  switch (t) {
    case Topology::chain: return "chain";
    case Topology::triangle: return "triangle";
    case Topology::momentum_coupled: return "momentum_coupled";
    case Topology::custom: return "custom";
  }
  return "unknown";
}

Topology topology_from_string(const std::string& name) {
  if (name == "chain") return Topology::chain;
  if (name == "triangle") return Topology::triangle;
  if (name == "momentum_coupled") return Topology::momentum_coupled;
  if (name == "custom") return Topology::custom;
  throw InvalidArgument("unknown topology '" + name +
                        "' (expected chain, triangle, momentum_coupled or custom)");
}

const char* to_string(External x) { return x == External::a ? "a" : "b"; }

int NetworkSpec::n_sites() const {
  switch (kind) {
    case Topology::triangle:
    case Topology::momentum_coupled:
      return 3;
    case Topology::custom:
      return custom_hessian ? custom_hessian->n_modes() : sites;
    case Topology::chain:
      break;
  }
  return sites;
}

void NetworkSpec::validate() const {
  switch (kind) {
    case Topology::chain:
      require(sites >= 2, "chain needs at least 2 sites, got " + std::to_string(sites));
      require(omega > 0.0, "chain needs omega > 0");
      require(kappa >= 0.0, "chain needs kappa >= 0");
      break;
    case Topology::triangle:
      require(sites == 0 || sites == 3, "triangle has exactly 3 sites");
      require(omega > 0.0, "triangle needs omega > 0");
      require(kappa >= 0.0 && kappa_prime >= 0.0, "triangle needs kappa, kappa_prime >= 0");
      break;
    case Topology::momentum_coupled: {
      require(sites == 0 || sites == 3, "momentum_coupled network has exactly 3 sites");
      require(omega > 0.0, "momentum_coupled needs omega > 0");
      require(kappa >= 0.0 && gamma >= 0.0, "momentum_coupled needs kappa, gamma >= 0");
      if (omega <= kappa + gamma) {
        std::ostringstream os;
        os << "momentum_coupled network needs omega > kappa + gamma (omega = " << omega
           << ", kappa + gamma = " << kappa + gamma << ")";
        throw NotPositiveDefinite(os.str(), omega - kappa - gamma);
      }
      break;
    }
    case Topology::custom:
      require(custom_hessian.has_value(), "custom topology needs a hessian");
      require(sites == 0 || sites == custom_hessian->n_modes(),
              "custom hessian dimension does not match the site count");
      break;
  }
}

double SystemSpec::max_epsilon() const {
  double out = 0.0;
  for (const auto& att : attachments) out = std::max(out, att.epsilon);
  return out;
}

void SystemSpec::validate() const {
  network.validate();
  require(Omega > 0.0, "Omega must be > 0");
  require(hbar > 0.0, "hbar must be > 0");
  const int n = n_network();
  for (const auto& att : attachments) {
    if (att.site < 0 || att.site >= n) {
      throw InvalidArgument("attachment of " + std::string(to_string(att.external)) +
                            " to site " + std::to_string(att.site + 1) + " is outside 1.." +
                            std::to_string(n));
    }
    require(att.epsilon >= 0.0, "attachment epsilon must be >= 0");
  }
}

QuadraticForm build_chain_hessian(int n, double omega, double kappa) {
  NetworkSpec net{Topology::chain, n, omega, kappa, 0.0, 0.0, std::nullopt};
  net.validate();
  Matrix q = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    q(j, j) = omega + kappa;
    if (j + 1 < n) q(j, j + 1) = q(j + 1, j) = -kappa / 2.0;
  }
  q(0, 0) -= kappa / 2.0;
  q(n - 1, n - 1) -= kappa / 2.0;
  return QuadraticForm(linalg::direct_sum(q, omega * Matrix::Identity(n, n)));
}

QuadraticForm build_triangle_hessian(double omega, double kappa, double kappa_prime) {
  NetworkSpec net{Topology::triangle, 3, omega, kappa, kappa_prime, 0.0, std::nullopt};
  net.validate();
  const double side = 0.5 * (kappa + kappa_prime) + omega;
  Matrix q(3, 3);
  q << kappa + omega, -kappa / 2, -kappa / 2,
       -kappa / 2, side, -kappa_prime / 2,
       -kappa / 2, -kappa_prime / 2, side;
  return QuadraticForm(linalg::direct_sum(q, omega * Matrix::Identity(3, 3)));
}

QuadraticForm build_momentum_coupled_hessian(double omega, double kappa, double gamma) {
  NetworkSpec net{Topology::momentum_coupled, 3, omega, kappa, 0.0, gamma, std::nullopt};
  net.validate();
  Matrix adjacency(3, 3);
  adjacency << 0, 1, 0,
               1, 0, 1,
               0, 1, 0;
  const Matrix c = gamma * Matrix::Identity(3, 3) - (kappa / std::sqrt(2.0)) * adjacency;
  Matrix h(6, 6);
  h << omega * Matrix::Identity(3, 3), c,
       c, omega * Matrix::Identity(3, 3);
  return QuadraticForm(h);
}

QuadraticForm network_hessian(const NetworkSpec& net) {
  net.validate();
  switch (net.kind) {
    case Topology::chain: return build_chain_hessian(net.sites, net.omega, net.kappa);
    case Topology::triangle: return build_triangle_hessian(net.omega, net.kappa, net.kappa_prime);
    case Topology::momentum_coupled:
      return build_momentum_coupled_hessian(net.omega, net.kappa, net.gamma);
    case Topology::custom: break;
  }
  detail::require_positive_definite(net.custom_hessian->matrix());
  return *net.custom_hessian;
}

QuadraticForm assemble_system_hessian(const SystemSpec& spec) {
  spec.validate();
  const int n = spec.n_network();
  const int total = n + 2;
  const Matrix hn = network_hessian(spec.network).matrix();

  Matrix h = Matrix::Zero(2 * total, 2 * total);
  for (int x = 0; x < 2; ++x) {
    h(x, x) = spec.Omega;
    h(x + total, x + total) = spec.Omega;
  }
  // Scatter H_N's four n×n blocks into the global (q.., p..) layout.
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      h.block(2 + bi * total, 2 + bj * total, n, n) = hn.block(bi * n, bj * n, n, n);
    }
  }
  for (const auto& att : spec.attachments) {
    const int x = layout::q_external(att.external);
    const int s = layout::q_site(att.site);
    h(x, x) += att.epsilon / 2.0;
    h(s, s) += att.epsilon / 2.0;
    h(x, s) -= att.epsilon / 2.0;
    h(s, x) -= att.epsilon / 2.0;
  }
  detail::require_positive_definite(h);
  return QuadraticForm(h);
}

WilliamsonDecomposition analytic_williamson(const NetworkSpec& net) {
  net.validate();
  const double w = net.omega;
  switch (net.kind) {
    case Topology::chain: {
      const int n = net.sites;
      Vector h(n);
      for (int k = 0; k < n; ++k) {
        h(k) = w + net.kappa - net.kappa * std::cos(k * std::numbers::pi / n);
      }
      return position_coupled(chain_modes(n), h, w);
    }
    case Topology::triangle: {
      Vector h(3);
      h << w, w + net.kappa / 2 + net.kappa_prime, w + 1.5 * net.kappa;
      return position_coupled(triangle_modes(), h, w);
    }
    case Topology::momentum_coupled: {
      const Matrix o_hat = momentum_modes();
      Vector c(3);
      c << net.gamma + net.kappa, net.gamma - net.kappa, net.gamma;
      Vector scale(3), spectrum(3);
      for (int k = 0; k < 3; ++k) {
        scale(k) = std::pow((w - c(k)) / (w + c(k)), 0.25);
        spectrum(k) = std::sqrt(w * w - c(k) * c(k));
      }
      // R (Ô ⊕ Ô) with R = (1/√2)[[I, I], [−I, I]].
      Matrix rotated(6, 6);
      rotated << o_hat, o_hat, -o_hat, o_hat;
      rotated /= std::sqrt(2.0);
      Vector d(6);
      d << scale, scale.cwiseInverse();
      return sorted_modes(d.asDiagonal() * rotated, rotated, spectrum);
    }
    case Topology::custom: break;
  }
  throw UnsupportedTopology("no closed-form diagonalization for custom networks; use williamson()");
}

WilliamsonDecomposition network_williamson(const NetworkSpec& net) {
  if (net.kind == Topology::custom) return williamson(network_hessian(net));
  return analytic_williamson(net);
}

Matrix embed_network_symplectic(const Matrix& s_network) {
  const int n = static_cast<int>(s_network.rows() / 2);
  const int total = n + 2;
  Matrix s = Matrix::Zero(2 * total, 2 * total);
  for (int x = 0; x < 2; ++x) {
    s(x, x) = 1.0;
    s(x + total, x + total) = 1.0;
  }
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      s.block(2 + bi * total, 2 + bj * total, n, n) = s_network.block(bi * n, bj * n, n, n);
    }
  }
  return s;
}

}  // namespace oscbus
