#include "iqa/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iqa {

char axis_name(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

MomentumGrid momentum_grid(int n_sites) {
  if (n_sites < 4 || n_sites % 2 != 0) {
    throw std::invalid_argument("momentum grid needs an even N >= 4, got " +
                                std::to_string(n_sites));
  }
  MomentumGrid grid;
  grid.n_sites = n_sites;
  grid.ks.reserve(static_cast<std::size_t>(n_sites / 2));
  for (int n = 0; n < n_sites / 2; ++n) {
    grid.ks.push_back((2.0 * n + 1.0) * std::numbers::pi / n_sites);
  }
  return grid;
}

BasisDescriptor::BasisDescriptor(int n_sites, int max_range)
    : n_sites_(n_sites), max_range_(max_range) {
  if (n_sites < 4 || n_sites % 2 != 0) {
    throw std::invalid_argument("basis needs an even N >= 4, got " + std::to_string(n_sites));
  }
  const int half = n_sites / 2;
  if (max_range < 1 || max_range > half) {
    throw std::invalid_argument("interaction range l must satisfy 1 <= l <= N/2 = " +
                                std::to_string(half) + ", got " + std::to_string(max_range));
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  labels_.push_back({0, Axis::Z, inv_sqrt2});
  for (int m = 1; m <= max_range; ++m) {
    if (m == half) {
      labels_.push_back({m, Axis::X, inv_sqrt2});
      labels_.push_back({m, Axis::Y, inv_sqrt2});
    } else {
      labels_.push_back({m, Axis::X, 1.0});
      labels_.push_back({m, Axis::Y, 1.0});
      labels_.push_back({m, Axis::Z, 1.0});
    }
  }
}

std::optional<std::size_t> BasisDescriptor::index_of(int range, Axis axis) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].range == range && labels_[i].axis == axis) return i;
  }
  return std::nullopt;
}

BasisDescriptor basis_descriptor(int n_sites, int max_range) {
  return BasisDescriptor(n_sites, max_range);
}

TargetBloch target_bloch(double lambda, double k) {
  check_lambda(lambda);
  const double s = std::sin(lambda * std::numbers::pi / 2.0);
  const double c = std::cos(lambda * std::numbers::pi / 2.0);
  // Pairing and diagonal components of the unnormalized field.
  const double px = s * std::sin(k);
  const double pz = c + s * std::cos(k);
  const double eps = std::sqrt(1.0 + 2.0 * s * c * std::cos(k));
  // atan2 keeps theta continuous along the path where pz changes sign.
  return {-px / eps, -pz / eps, eps, 0.5 * std::atan2(px, pz)};
}

CouplingVector::CouplingVector(BasisDescriptor basis, Eigen::VectorXd h)
    : basis_(std::move(basis)), h_(std::move(h)) {
  if (static_cast<std::size_t>(h_.size()) != basis_.size()) {
    throw std::invalid_argument("coupling vector length " + std::to_string(h_.size()) +
                                " does not match basis size " + std::to_string(basis_.size()));
  }
  if (!h_.allFinite()) throw std::invalid_argument("coupling vector has non-finite entries");
}

CouplingVector CouplingVector::normalized() const {
  const double n = h_.norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero coupling vector");
  return {basis_, h_ / n};
}

CouplingVector kitaev_couplings(double lambda, const BasisDescriptor& basis) {
  if (basis.max_range() < 1) throw std::invalid_argument("kitaev couplings need l >= 1");
  check_lambda(lambda);
  const double n = basis.n_sites();
  const double s = std::sin(lambda * std::numbers::pi / 2.0);
  const double c = std::cos(lambda * std::numbers::pi / 2.0);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  // sum_j (c_j^+ c_j - c_j c_j^+) = sqrt(N) Sigma_0^Z = sqrt(2N) L_(0,Z);
  // nearest-neighbour pairing and hopping map onto sqrt(N) Sigma_1^X, Sigma_1^Z.
  h[static_cast<Eigen::Index>(*basis.index_of(0, Axis::Z))] = std::sqrt(2.0 * n) * c;
  h[static_cast<Eigen::Index>(*basis.index_of(1, Axis::X))] = std::sqrt(n) * s;
  h[static_cast<Eigen::Index>(*basis.index_of(1, Axis::Z))] = std::sqrt(n) * s;
  return {basis, std::move(h)};
}

}  // namespace iqa
