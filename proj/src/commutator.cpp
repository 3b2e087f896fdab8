#include "iqa/commutator.hpp"

#include <cmath>

namespace iqa {

Block3 block(double lambda, double k) {
  const TargetBloch v = target_bloch(lambda, k);
  Block3 b;
  b << 0.0, v.vz, 0.0,
       -v.vz, 0.0, v.vx,
       0.0, -v.vx, 0.0;
  return b;
}

FourierMatrix::FourierMatrix(BasisDescriptor basis)
    : basis_(std::move(basis)), grid_(momentum_grid(basis_.n_sites())) {
  const auto rows = static_cast<Eigen::Index>(basis_.size());
  const auto nk = static_cast<Eigen::Index>(grid_.size());
  const double amp = 2.0 / std::sqrt(static_cast<double>(basis_.n_sites()));
  coeff_.resize(rows, nk);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const BasisLabel& lab = basis_[static_cast<std::size_t>(i)];
    for (Eigen::Index q = 0; q < nk; ++q) {
      const double mk = lab.range * grid_.ks[static_cast<std::size_t>(q)];
      const double f = lab.axis == Axis::Z ? std::cos(mk) : std::sin(mk);
      coeff_(i, q) = lab.scale * amp * f;
    }
  }
}

Eigen::MatrixXd FourierMatrix::dense() const {
  const Eigen::Index nk = coeff_.cols();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(coeff_.rows(), 3 * nk);
  for (Eigen::Index i = 0; i < coeff_.rows(); ++i) {
    const auto a = static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(i)].axis);
    for (Eigen::Index q = 0; q < nk; ++q) f(i, 3 * q + a) = coeff_(i, q);
  }
  return f;
}

FourierMatrix fourier_matrix(const BasisDescriptor& basis) { return FourierMatrix(basis); }

namespace {

// blocks[q] holds the 3x3 block at momentum k_q, row-major.
std::vector<std::array<double, 9>> target_blocks(double lambda, const MomentumGrid& grid) {
  std::vector<std::array<double, 9>> blocks(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const Block3 b = block(lambda, grid.ks[q]);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) blocks[q][static_cast<std::size_t>(3 * r + c)] = b(r, c);
  }
  return blocks;
}

// One row of K: K_ij = sum_k C_ik C_jk B_k[alpha_i][alpha_j].
inline void accumulate_row(Eigen::Index i, const FourierMatrix& f,
                           const std::vector<std::array<double, 9>>& blocks,
                           Eigen::MatrixXd& k) {
  const auto& c = f.coefficients();
  const auto& basis = f.basis();
  const auto ai = static_cast<std::size_t>(basis[static_cast<std::size_t>(i)].axis);
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    const auto aj = static_cast<std::size_t>(basis[static_cast<std::size_t>(j)].axis);
    double sum = 0.0;
    for (Eigen::Index q = 0; q < c.cols(); ++q) {
      sum += c(i, q) * c(j, q) * blocks[static_cast<std::size_t>(q)][3 * ai + aj];
    }
    k(i, j) = sum;
  }
}

}  // namespace

CommutatorMatrix commutator_matrix(double lambda, const FourierMatrix& fourier) {
  const auto blocks = target_blocks(lambda, fourier.grid());
  const auto d = static_cast<Eigen::Index>(fourier.basis().size());
  CommutatorMatrix out{fourier.basis(), lambda, Eigen::MatrixXd(d, d)};
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < d; ++i) accumulate_row(i, fourier, blocks, out.entries);
  return out;
}

CommutatorMatrix commutator_matrix(double lambda, const BasisDescriptor& basis) {
  return commutator_matrix(lambda, FourierMatrix(basis));
}

namespace reference {

CommutatorMatrix commutator_matrix_serial(double lambda, const FourierMatrix& fourier) {
  const auto blocks = target_blocks(lambda, fourier.grid());
  const auto d = static_cast<Eigen::Index>(fourier.basis().size());
  CommutatorMatrix out{fourier.basis(), lambda, Eigen::MatrixXd(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) accumulate_row(i, fourier, blocks, out.entries);
  return out;
}

CommutatorMatrix commutator_matrix_direct(double lambda, const FourierMatrix& fourier) {
  const MomentumGrid& grid = fourier.grid();
  const auto nk = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd kprime = Eigen::MatrixXd::Zero(3 * nk, 3 * nk);
  for (Eigen::Index q = 0; q < nk; ++q) {
    kprime.block<3, 3>(3 * q, 3 * q) = block(lambda, grid.ks[static_cast<std::size_t>(q)]);
  }
  const Eigen::MatrixXd f = fourier.dense();
  return {fourier.basis(), lambda, f * kprime * f.transpose()};
}

}  // namespace reference

CommutatorAction::CommutatorAction(const FourierMatrix& fourier) : ks_(fourier.grid().ks) {
  const auto& basis = fourier.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    rows_[static_cast<std::size_t>(basis[i].axis)].push_back(static_cast<Eigen::Index>(i));
  }
  const auto nk = static_cast<Eigen::Index>(ks_.size());
  for (std::size_t a = 0; a < 3; ++a) {
    const auto n = static_cast<Eigen::Index>(rows_[a].size());
    coeff_[a].resize(n, nk);
    for (Eigen::Index r = 0; r < n; ++r) coeff_[a].row(r) = fourier.coefficients().row(rows_[a][static_cast<std::size_t>(r)]);
    gathered_[a].resize(n);
    rotated_[a].resize(nk);
    field_[a].resize(nk);
  }
  vx_.resize(nk);
  vz_.resize(nk);
}

void CommutatorAction::set_lambda(double lambda) {
  if (lambda == lambda_) return;
  for (std::size_t q = 0; q < ks_.size(); ++q) {
    const TargetBloch v = target_bloch(lambda, ks_[q]);
    vx_[static_cast<Eigen::Index>(q)] = v.vx;
    vz_[static_cast<Eigen::Index>(q)] = v.vz;
  }
  lambda_ = lambda;
}

void CommutatorAction::apply(const Eigen::VectorXd& h, Eigen::VectorXd& out) const {
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t r = 0; r < rows_[a].size(); ++r) {
      gathered_[a][static_cast<Eigen::Index>(r)] = h[rows_[a][r]];
    }
    field_[a].noalias() = coeff_[a].transpose() * gathered_[a];
  }
  // Per-momentum block applied to the pseudospin field (x, y, z).
  rotated_[0] = vz_.cwiseProduct(field_[1]);
  rotated_[1] = vx_.cwiseProduct(field_[2]) - vz_.cwiseProduct(field_[0]);
  rotated_[2] = -vx_.cwiseProduct(field_[1]);
  out.resize(h.size());
  for (std::size_t a = 0; a < 3; ++a) {
    gathered_[a].noalias() = coeff_[a] * rotated_[a];
    for (std::size_t r = 0; r < rows_[a].size(); ++r) {
      out[rows_[a][r]] = gathered_[a][static_cast<Eigen::Index>(r)];
    }
  }
}

}  // namespace iqa
