#pragma once

// Commutator matrix K^(l)(lambda) = F K'(lambda) F^T and its matrix-free action.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "iqa/model.hpp"

namespace iqa {

using Block3 = Eigen::Matrix3d;

/// Per-momentum skew block [[0, vz, 0], [-vz, 0, vx], [0, -vx, 0]].
Block3 block(double lambda, double k);

/// Fourier matrix mapping the basis onto pseudospin components.
///
/// Row i (label (m, alpha)) is nonzero only in the (k, alpha) columns, where it
/// holds scale * (2/sqrt(N)) * f_alpha(m k) with f = sin for X, Y and cos for Z.
/// Only those nonzeros are stored (|basis| x N/2). For l = N/2 the dense
/// form is square and orthogonal.
class FourierMatrix {
 public:
  FourierMatrix() = default;
  explicit FourierMatrix(BasisDescriptor basis);

  const BasisDescriptor& basis() const { return basis_; }
  const MomentumGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& coefficients() const { return coeff_; }
  double coefficient(std::size_t row, std::size_t kidx) const {
    return coeff_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(kidx));
  }

  /// Dense |basis| x 3N/2 matrix, columns (k1,x),(k1,y),(k1,z),(k2,x),...
  Eigen::MatrixXd dense() const;

 private:
  BasisDescriptor basis_;
  MomentumGrid grid_;
  Eigen::MatrixXd coeff_;
};

FourierMatrix fourier_matrix(const BasisDescriptor& basis);

struct CommutatorMatrix {
  BasisDescriptor basis;
  double lambda = 0.0;
  Eigen::MatrixXd entries;
};

/// Per-k accumulation, rows distributed over OpenMP threads. Bit-identical to
/// reference::commutator_matrix_serial for any thread count.
CommutatorMatrix commutator_matrix(double lambda, const FourierMatrix& fourier);
CommutatorMatrix commutator_matrix(double lambda, const BasisDescriptor& basis);

namespace reference {

CommutatorMatrix commutator_matrix_serial(double lambda, const FourierMatrix& fourier);

/// Materializes the block-diagonal K' and the dense F.
CommutatorMatrix commutator_matrix_direct(double lambda, const FourierMatrix& fourier);

}  // namespace reference

/// h -> K(lambda) h in O(|basis| N) without forming K.
class CommutatorAction {
 public:
  explicit CommutatorAction(const FourierMatrix& fourier);

  void set_lambda(double lambda);
  double lambda() const { return lambda_; }

  void apply(const Eigen::VectorXd& h, Eigen::VectorXd& out) const;

 private:
  std::array<std::vector<Eigen::Index>, 3> rows_;   // basis rows per axis
  std::array<Eigen::MatrixXd, 3> coeff_;            // |rows_a| x N/2
  std::vector<double> ks_;
  Eigen::VectorXd vx_, vz_;
  double lambda_ = -1.0;
  // Scratch; apply() is logically const.
  mutable std::array<Eigen::VectorXd, 3> gathered_, field_, rotated_;
};

}  // namespace iqa
