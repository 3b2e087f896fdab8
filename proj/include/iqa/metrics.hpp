#pragma once

// Adiabaticity, fidelity-threshold and locality diagnostics.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "iqa/annealer.hpp"
#include "iqa/cache.hpp"
#include "iqa/commutator.hpp"
#include "iqa/model.hpp"

namespace iqa {

/// |h_a - h_b| / |h_b|. The basis is orthogonal with equal norms, so this is
/// the relative Hilbert-Schmidt distance between the two Hamiltonians.
double relative_distance(const Eigen::VectorXd& h_a, const Eigen::VectorXd& h_b);

/// Pointwise R(lambda) = |h_long - h_short| / |h_short| over a shared grid.
std::vector<double> distance_profile(const Trajectory& traj_short, const Trajectory& traj_long);

struct DistancePeak {
  double lambda_star = 0.0;
  double r_max = 0.0;
  double grid_step = 0.0;  // resolution of lambda_star
};

DistancePeak max_R(const Trajectory& traj_short, const Trajectory& traj_long);

/// norms[r] = sqrt(sum over labels of range r of h_i^2), r = 0..l.
struct RangeProfile {
  std::vector<double> norms;
};

RangeProfile range_profile(const CouplingVector& h);

/// sum_r r |h_r| / sum_r |h_r|.
double r_avg_h(const RangeProfile& profile);
double r_avg_h(const CouplingVector& h);

/// sum_ij |i-j| |K_ij| / sum_ij |K_ij| over canonical label positions.
double r_avg_K(const CommutatorMatrix& k);

/// Least l such that fidelity_by_l[l'-1] >= 1 - eps for every l' >= l.
std::optional<int> l_epsilon_from(std::span<const double> fidelity_by_l, double eps);

/// Anneals l = 1..N/2 (through `cache`) and applies l_epsilon_from at lambda,
/// which must lie on the sample grid of `params`.
std::optional<int> l_epsilon(double lambda, int n_sites, double eps, double total_time,
                             TrajectoryCache& cache, const AnnealParams& params = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace iqa
