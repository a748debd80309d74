#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscbus/symplectic.hpp"

namespace oscbus {

enum class Topology { chain, triangle, momentum_coupled, custom };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& name);

/// Parameters of the bus network. Sites are 0-based here; configs and
/// messages use 1-based numbering.
struct NetworkSpec {
  Topology kind = Topology::chain;
  int sites = 0;
  double omega = 1.0;
  double kappa = 0.0;
  double kappa_prime = 0.0;
  double gamma = 0.0;
  std::optional<QuadraticForm> custom_hessian;

  int n_sites() const;
  void validate() const;
};

enum class External { a, b };

const char* to_string(External x);

struct Attachment {
  External external = External::a;
  int site = 0;
  double epsilon = 0.0;
};

struct SystemSpec {
  NetworkSpec network;
  double Omega = 1.0;
  std::vector<Attachment> attachments;
  double hbar = 1.0;

  int n_network() const { return network.n_sites(); }
  int n_total() const { return network.n_sites() + 2; }
  double max_epsilon() const;
  void validate() const;
};

// Index helpers for the global ordering (q_a, q_b, q_1..q_N, p_a, p_b, p_1..p_N).
namespace layout {
inline int q_external(External x) { return x == External::a ? 0 : 1; }
inline int q_site(int site) { return 2 + site; }
inline int p_of(int q, int n_total) { return q + n_total; }
}  // namespace layout

QuadraticForm build_chain_hessian(int n, double omega, double kappa);
QuadraticForm build_triangle_hessian(double omega, double kappa, double kappa_prime);
QuadraticForm build_momentum_coupled_hessian(double omega, double kappa, double gamma);

/// Network Hessian H_N for any topology (custom returns the user form).
QuadraticForm network_hessian(const NetworkSpec& net);

/// Full Hessian over (q_a, q_b, q_1..q_N, p_a, p_b, p_1..p_N); each
/// attachment contributes ε/4·(q_s − q_x)².
QuadraticForm assemble_system_hessian(const SystemSpec& spec);

/// Closed-form symplectic diagonalization of the built-in topologies.
/// Modes are sorted by ascending frequency.
WilliamsonDecomposition analytic_williamson(const NetworkSpec& net);

/// analytic_williamson for built-in topologies, generic williamson otherwise.
WilliamsonDecomposition network_williamson(const NetworkSpec& net);

/// Lifts a network symplectic S_N to the global ordering as I ⊕ S_N, the
/// external block being already in normal form (H_e = Ω I).
Matrix embed_network_symplectic(const Matrix& s_network);

}  // namespace oscbus
