#pragma once

// Momentum grid, translation-invariant quadratic operator basis and the
// Kitaev target path.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace iqa {

/// Critical point of the Kitaev path.
inline constexpr double kCriticalLambda = 0.5;

enum class Axis { X = 0, Y = 1, Z = 2 };

char axis_name(Axis a);

/// Half-integer momenta k = (2n+1)pi/N, n = 0..N/2-1 (antiperiodic,
/// even-parity sector).
struct MomentumGrid {
  int n_sites = 0;
  std::vector<double> ks;

  std::size_t size() const { return ks.size(); }
};

MomentumGrid momentum_grid(int n_sites);

struct BasisLabel {
  int range;     // m
  Axis axis;     // alpha
  double scale;  // 1/sqrt(2) on (0,Z) and (N/2, X|Y), 1 elsewhere

  bool operator==(const BasisLabel&) const = default;
};

/// Ordered l-local basis: (0,Z), (1,X), (1,Y), (1,Z), ..., (l,X), (l,Y), (l,Z)
/// for l < N/2; the full basis l = N/2 ends with (N/2,X), (N/2,Y) instead.
class BasisDescriptor {
 public:
  BasisDescriptor() = default;
  BasisDescriptor(int n_sites, int max_range);

  int n_sites() const { return n_sites_; }
  int max_range() const { return max_range_; }
  bool is_full() const { return max_range_ == n_sites_ / 2; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<BasisLabel>& labels() const { return labels_; }
  const BasisLabel& operator[](std::size_t i) const { return labels_[i]; }

  /// Canonical position of (range, axis), if the label is present.
  std::optional<std::size_t> index_of(int range, Axis axis) const;

  bool operator==(const BasisDescriptor& o) const {
    return n_sites_ == o.n_sites_ && max_range_ == o.max_range_;
  }

 private:
  int n_sites_ = 0;
  int max_range_ = 0;
  std::vector<BasisLabel> labels_;
};

BasisDescriptor basis_descriptor(int n_sites, int max_range);

/// Normalized target pseudospin field of H_K(lambda) at momentum k:
/// H_K = -2 sum_k eps_k (v_x sx + v_z sz).
struct TargetBloch {
  double vx;
  double vz;
  double eps;
  double theta;
};

TargetBloch target_bloch(double lambda, double k);

/// Coefficients h_i over a basis. Entries are finite and one per label.
class CouplingVector {
 public:
  CouplingVector() = default;
  CouplingVector(BasisDescriptor basis, Eigen::VectorXd h);

  const BasisDescriptor& basis() const { return basis_; }
  const Eigen::VectorXd& h() const { return h_; }
  double operator[](std::size_t i) const { return h_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return h_.norm(); }

  CouplingVector scaled(double c) const { return {basis_, c * h_}; }
  CouplingVector normalized() const;

 private:
  BasisDescriptor basis_;
  Eigen::VectorXd h_;
};

/// H_K(lambda)/J expanded over `basis`; nonzero only on (0,Z), (1,X), (1,Z).
CouplingVector kitaev_couplings(double lambda, const BasisDescriptor& basis);

void check_lambda(double lambda);

}  // namespace iqa
