#pragma once

// Dense brute-force reference for small chains (N <= 10).
//
// Operators are built on the 2^N fermionic Fock space through the
// Jordan-Wigner ordering c_j = (prod_{j'<j} sigma^z_{j'}) sigma^-_j, with
// occupied site <-> spin down. All analytic quantities in the library have a
// counterpart here that never touches the pseudospin representation.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "iqa/model.hpp"

namespace iqa::oracle {

inline constexpr int kMaxSites = 10;

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenseOperator {
  int n_sites = 0;
  bool even_block = false;  // matrix acts on the even-parity subspace only
  Eigen::MatrixXcd matrix;
};

/// Even-parity computational states in ascending order; defines the row
/// order of every even-block operator and state.
std::vector<std::uint32_t> even_states(int n_sites);

DenseOperator parity_operator(int n_sites);
DenseOperator even_block(const DenseOperator& full);

/// S_m^alpha from Pauli strings with z-string interiors and periodic
/// boundary, prefactor 1/(4 sqrt N) (1/(2 sqrt N) with a minus sign for S_0^Z).
/// S_m^Y carries an overall minus sign relative to the (xy + yx) string so
/// that the even block of 2 S_m^alpha equals fermion_sigma(m, alpha) for
/// every axis.
DenseOperator spin_string_operator(int m, Axis axis, int n_sites);

/// Fermionic Sigma_m^alpha with antiperiodic boundary, normalized so that its
/// pseudospin image is (2/sqrt N) sum_k f(mk) sigma_k^alpha:
///   X: (1/sqrt N)  sum_j (c_j^+ c_{j+m}^+ + c_{j+m} c_j)
///   Y: (-i/sqrt N) sum_j (c_j^+ c_{j+m}^+ - c_{j+m} c_j)
///   Z: (1/sqrt N)  sum_j (c_j^+ c_{j+m} - c_j c_{j+m}^+)
DenseOperator fermion_sigma(int m, Axis axis, int n_sites, bool even_only = true);

/// Basis element L_i = scale_i * Sigma_{m_i}^{alpha_i} (even block).
DenseOperator basis_operator(const BasisLabel& label, int n_sites);

/// Position-space H_K(lambda) with J = 1 and c_{N+1} = -c_1 (even block).
DenseOperator kitaev_hamiltonian(double lambda, int n_sites);

/// sum_i h_i L_i (even block).
DenseOperator hamiltonian(const CouplingVector& h);

double ground_energy(const DenseOperator& op);

/// Ground state of the dense H_K(lambda); largest amplitude made real positive.
Eigen::VectorXcd dense_target_state(double lambda, int n_sites);

/// prod_k (cos theta_k - sin theta_k c_k^+ c_{-k}^+)|0>, built from theta_k alone.
Eigen::VectorXcd product_target_state(double lambda, int n_sites);

/// Raw i <psi(lambda)| [L_i, L_j] |psi(lambda)>.
Eigen::MatrixXd commutator_expectation(double lambda, int n_sites, int l);

/// Commutator matrix in the flow normalization used by the analytic module:
/// -1/2 * i <[L_i, L_j]>.
Eigen::MatrixXd dense_commutator_matrix(double lambda, int n_sites, int l);

/// |<GS(sum_i h_i L_i) | psi(lambda)>|^2.
double dense_ground_overlap(const CouplingVector& h, double lambda);

}  // namespace iqa::oracle
