#include "iqa/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace iqa::oracle {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

void check_sites(int n_sites) {
  if (n_sites > kMaxSites) {
    throw ResourceError("dense oracle is limited to N <= " + std::to_string(kMaxSites) +
                        ", got " + std::to_string(n_sites));
  }
  if (n_sites < 4 || n_sites % 2 != 0) {
    throw std::invalid_argument("dense oracle needs an even N >= 4");
  }
}

struct FermionOp {
  bool create;
  int site;
};

// c_j / c_j^+ on a Fock state; returns false when the result vanishes.
bool apply_fermion(FermionOp op, std::uint32_t& state, double& sign) {
  const std::uint32_t bit = 1u << op.site;
  if (op.create == ((state & bit) != 0)) return false;
  if (std::popcount(state & (bit - 1u)) % 2 != 0) sign = -sign;
  state ^= bit;
  return true;
}

// Sparse accumulation of sum_t coef_t * (ops_t applied right to left).
class OperatorBuilder {
 public:
  OperatorBuilder(int n_sites, bool even_only)
      : n_sites_(n_sites), even_only_(even_only), index_(std::size_t{1} << n_sites, -1) {
    for (std::uint32_t s = 0; s < (1u << n_sites); ++s) {
      if (!even_only || std::popcount(s) % 2 == 0) {
        index_[s] = static_cast<int>(states_.size());
        states_.push_back(s);
      }
    }
    const auto d = static_cast<Eigen::Index>(states_.size());
    matrix_ = Eigen::MatrixXcd::Zero(d, d);
  }

  void add(cplx coef, std::initializer_list<FermionOp> ops) {
    for (std::size_t col = 0; col < states_.size(); ++col) {
      std::uint32_t s = states_[col];
      double sign = 1.0;
      bool alive = true;
      for (auto it = std::rbegin(ops); it != std::rend(ops) && alive; ++it) {
        alive = apply_fermion(*it, s, sign);
      }
      if (!alive) continue;
      const int row = index_[s];
      if (row < 0) throw std::logic_error("bilinear left the parity sector");
      matrix_(row, static_cast<Eigen::Index>(col)) += coef * sign;
    }
  }

  DenseOperator build() { return {n_sites_, even_only_, std::move(matrix_)}; }

 private:
  int n_sites_;
  bool even_only_;
  std::vector<int> index_;
  std::vector<std::uint32_t> states_;
  Eigen::MatrixXcd matrix_;
};

// Site j+m with the antiperiodic sign c_{N+m} = -c_m.
std::pair<int, double> wrap(int site, int n_sites) {
  return site >= n_sites ? std::pair{site - n_sites, -1.0} : std::pair{site, 1.0};
}

// Pauli string acting on computational states (bit 0 = spin up = empty site).
struct PauliFactor {
  char kind;  // 'x', 'y', 'z'
  int site;
};

void add_pauli_string(Eigen::MatrixXcd& m, cplx coef, const std::vector<PauliFactor>& factors) {
  const auto dim = static_cast<std::uint32_t>(m.rows());
  for (std::uint32_t col = 0; col < dim; ++col) {
    std::uint32_t s = col;
    cplx amp = coef;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const std::uint32_t bit = 1u << it->site;
      const bool down = (s & bit) != 0;
      switch (it->kind) {
        case 'x': s ^= bit; break;
        case 'y': amp *= down ? -kI : kI; s ^= bit; break;
        case 'z': if (down) amp = -amp; break;
      }
    }
    m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(col)) += amp;
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> diagonalize(const DenseOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense diagonalization failed");
  return es;
}

Eigen::VectorXcd nondegenerate_ground(const DenseOperator& op) {
  const auto es = diagonalize(op);
  if (es.eigenvalues().size() > 1 && es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-10) {
    throw DegeneracyError("dense ground state is degenerate (gap " +
                          std::to_string(es.eigenvalues()[1] - es.eigenvalues()[0]) + ")");
  }
  Eigen::VectorXcd g = es.eigenvectors().col(0);
  Eigen::Index imax = 0;
  g.cwiseAbs().maxCoeff(&imax);
  g *= std::conj(g[imax]) / std::abs(g[imax]);
  return g;
}

}  // namespace

std::vector<std::uint32_t> even_states(int n_sites) {
  check_sites(n_sites);
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << n_sites); ++s) {
    if (std::popcount(s) % 2 == 0) out.push_back(s);
  }
  return out;
}

DenseOperator parity_operator(int n_sites) {
  check_sites(n_sites);
  const auto dim = static_cast<Eigen::Index>(1) << n_sites;
  Eigen::VectorXcd diag(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    diag[s] = std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0 ? 1.0 : -1.0;
  }
  return {n_sites, false, diag.asDiagonal()};
}

DenseOperator even_block(const DenseOperator& full) {
  if (full.even_block) return full;
  const auto states = even_states(full.n_sites);
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      m(r, c) = full.matrix(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)]);
    }
  }
  return {full.n_sites, true, std::move(m)};
}

DenseOperator spin_string_operator(int m, Axis axis, int n_sites) {
  check_sites(n_sites);
  if (m < 0 || m > n_sites / 2) throw std::invalid_argument("spin string range out of bounds");
  if (m == 0 && axis != Axis::Z) throw std::invalid_argument("S_0 exists only along Z");
  const auto dim = static_cast<Eigen::Index>(1) << n_sites;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  const double root_n = std::sqrt(static_cast<double>(n_sites));

  if (m == 0) {
    for (int j = 0; j < n_sites; ++j) add_pauli_string(op, -1.0 / (2.0 * root_n), {{'z', j}});
    return {n_sites, false, std::move(op)};
  }

  auto string = [&](char first, char last, int j) {
    std::vector<PauliFactor> f{{first, j}};
    for (int s = 1; s < m; ++s) f.push_back({'z', (j + s) % n_sites});
    f.push_back({last, (j + m) % n_sites});
    return f;
  };
  const double pre = 1.0 / (4.0 * root_n);
  for (int j = 0; j < n_sites; ++j) {
    switch (axis) {
      case Axis::X:
        add_pauli_string(op, pre, string('x', 'x', j));
        add_pauli_string(op, -pre, string('y', 'y', j));
        break;
      case Axis::Y:
        add_pauli_string(op, -pre, string('x', 'y', j));
        add_pauli_string(op, -pre, string('y', 'x', j));
        break;
      case Axis::Z:
        add_pauli_string(op, pre, string('x', 'x', j));
        add_pauli_string(op, pre, string('y', 'y', j));
        break;
    }
  }
  return {n_sites, false, std::move(op)};
}

DenseOperator fermion_sigma(int m, Axis axis, int n_sites, bool even_only) {
  check_sites(n_sites);
  if (m < 0 || m > n_sites / 2) throw std::invalid_argument("operator range out of bounds");
  OperatorBuilder b(n_sites, even_only);
  const double pre = 1.0 / std::sqrt(static_cast<double>(n_sites));
  for (int j = 0; j < n_sites; ++j) {
    const auto [jm, sign] = wrap(j + m, n_sites);
    switch (axis) {
      case Axis::X:
        b.add(pre * sign, {{true, j}, {true, jm}});
        b.add(pre * sign, {{false, jm}, {false, j}});
        break;
      case Axis::Y:
        b.add(-kI * pre * sign, {{true, j}, {true, jm}});
        b.add(kI * pre * sign, {{false, jm}, {false, j}});
        break;
      case Axis::Z:
        b.add(pre * sign, {{true, j}, {false, jm}});
        b.add(-pre * sign, {{false, j}, {true, jm}});
        break;
    }
  }
  return b.build();
}

DenseOperator basis_operator(const BasisLabel& label, int n_sites) {
  DenseOperator op = fermion_sigma(label.range, label.axis, n_sites, true);
  op.matrix *= label.scale;
  return op;
}

DenseOperator kitaev_hamiltonian(double lambda, int n_sites) {
  check_sites(n_sites);
  check_lambda(lambda);
  const double s = std::sin(lambda * std::numbers::pi / 2.0);
  const double c = std::cos(lambda * std::numbers::pi / 2.0);
  OperatorBuilder b(n_sites, true);
  for (int j = 0; j < n_sites; ++j) {
    const auto [j1, sign] = wrap(j + 1, n_sites);
    b.add(s * sign, {{true, j}, {true, j1}});    // c_j^+ c_{j+1}^+
    b.add(s * sign, {{false, j1}, {false, j}});  // h.c.
    b.add(s * sign, {{true, j}, {false, j1}});   // c_j^+ c_{j+1}
    b.add(s * sign, {{true, j1}, {false, j}});   // h.c.
    b.add(c, {{true, j}, {false, j}});
    b.add(-c, {{false, j}, {true, j}});
  }
  return b.build();
}

DenseOperator hamiltonian(const CouplingVector& h) {
  const int n = h.basis().n_sites();
  check_sites(n);
  DenseOperator out{n, true, Eigen::MatrixXcd::Zero(1 << (n - 1), 1 << (n - 1))};
  for (std::size_t i = 0; i < h.basis().size(); ++i) {
    if (h[i] == 0.0) continue;
    out.matrix += h[i] * basis_operator(h.basis()[i], n).matrix;
  }
  return out;
}

double ground_energy(const DenseOperator& op) { return diagonalize(op).eigenvalues()[0]; }

Eigen::VectorXcd dense_target_state(double lambda, int n_sites) {
  return nondegenerate_ground(kitaev_hamiltonian(lambda, n_sites));
}

Eigen::VectorXcd product_target_state(double lambda, int n_sites) {
  check_sites(n_sites);
  const MomentumGrid grid = momentum_grid(n_sites);
  const auto dim = static_cast<Eigen::Index>(1) << n_sites;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[0] = 1.0;  // vacuum
  for (double k : grid.ks) {
    const double theta = target_bloch(lambda, k).theta;
    // c_k^+ c_{-k}^+ = (i/N) sum_{j,j'} e^{ik(j-j')} c_j^+ c_{j'}^+
    Eigen::VectorXcd paired = Eigen::VectorXcd::Zero(dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      if (psi[col] == cplx{}) continue;
      for (int j = 0; j < n_sites; ++j) {
        for (int jp = 0; jp < n_sites; ++jp) {
          auto s = static_cast<std::uint32_t>(col);
          double sign = 1.0;
          if (!apply_fermion({true, jp}, s, sign) || !apply_fermion({true, j}, s, sign)) continue;
          const cplx phase = std::polar(1.0 / n_sites, k * (j - jp)) * kI;
          paired[static_cast<Eigen::Index>(s)] += sign * phase * psi[col];
        }
      }
    }
    psi = std::cos(theta) * psi - std::sin(theta) * paired;
  }
  const auto states = even_states(n_sites);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) out[static_cast<Eigen::Index>(i)] = psi[states[i]];
  return out;
}

Eigen::MatrixXd commutator_expectation(double lambda, int n_sites, int l) {
  const BasisDescriptor basis(n_sites, l);
  const Eigen::VectorXcd psi = dense_target_state(lambda, n_sites);
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd applied(psi.size(), d);
  for (Eigen::Index i = 0; i < d; ++i) {
    applied.col(i) = basis_operator(basis[static_cast<std::size_t>(i)], n_sites).matrix * psi;
  }
  // <psi|L_i L_j|psi> = <L_i psi | L_j psi>
  const Eigen::MatrixXcd gram = applied.adjoint() * applied;
  return (kI * (gram - gram.conjugate())).real();
}

Eigen::MatrixXd dense_commutator_matrix(double lambda, int n_sites, int l) {
  return -0.5 * commutator_expectation(lambda, n_sites, l);
}

double dense_ground_overlap(const CouplingVector& h, double lambda) {
  const Eigen::VectorXcd g = nondegenerate_ground(hamiltonian(h));
  const Eigen::VectorXcd psi = dense_target_state(lambda, h.basis().n_sites());
  return std::norm(g.dot(psi));
}

}  // namespace iqa::oracle
