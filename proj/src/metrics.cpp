#include "iqa/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace iqa {

double relative_distance(const Eigen::VectorXd& h_a, const Eigen::VectorXd& h_b) {
  if (h_a.size() != h_b.size()) throw std::invalid_argument("coupling vectors differ in length");
  const double nb = h_b.norm();
  if (nb == 0.0) throw std::invalid_argument("reference coupling vector has zero norm");
  return (h_a - h_b).norm() / nb;
}

namespace {

void check_same_grid(const Trajectory& a, const Trajectory& b) {
  if (!(a.basis == b.basis)) throw std::invalid_argument("trajectories use different bases");
  if (a.samples.size() != b.samples.size()) {
    throw std::invalid_argument("trajectories have different lambda grids");
  }
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (std::abs(a.samples[i].lambda - b.samples[i].lambda) > 1e-12) {
      throw std::invalid_argument("trajectories have different lambda grids");
    }
  }
}

}  // namespace

std::vector<double> distance_profile(const Trajectory& traj_short, const Trajectory& traj_long) {
  check_same_grid(traj_short, traj_long);
  std::vector<double> r(traj_short.samples.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = relative_distance(traj_long.samples[i].h, traj_short.samples[i].h);
  }
  return r;
}

DistancePeak max_R(const Trajectory& traj_short, const Trajectory& traj_long) {
  const auto r = distance_profile(traj_short, traj_long);
  DistancePeak peak;
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] > r[best]) best = i;
  }
  peak.lambda_star = traj_short.samples[best].lambda;
  peak.r_max = r[best];
  if (r.size() > 1) peak.grid_step = traj_short.samples[1].lambda - traj_short.samples[0].lambda;
  return peak;
}

RangeProfile range_profile(const CouplingVector& h) {
  RangeProfile p;
  p.norms.assign(static_cast<std::size_t>(h.basis().max_range() + 1), 0.0);
  for (std::size_t i = 0; i < h.basis().size(); ++i) {
    p.norms[static_cast<std::size_t>(h.basis()[i].range)] += h[i] * h[i];
  }
  for (double& v : p.norms) v = std::sqrt(v);
  return p;
}

double r_avg_h(const RangeProfile& profile) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < profile.norms.size(); ++r) {
    num += static_cast<double>(r) * profile.norms[r];
    den += profile.norms[r];
  }
  if (den == 0.0) throw std::invalid_argument("r_avg_h of a zero coupling vector");
  return num / den;
}

double r_avg_h(const CouplingVector& h) { return r_avg_h(range_profile(h)); }

double r_avg_K(const CommutatorMatrix& k) {
  double num = 0.0;
  double den = 0.0;
  const auto& e = k.entries;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      const double a = std::abs(e(i, j));
      num += static_cast<double>(std::abs(i - j)) * a;
      den += a;
    }
  }
  if (den == 0.0) throw std::invalid_argument("r_avg_K of a zero commutator matrix");
  return num / den;
}

std::optional<int> l_epsilon_from(std::span<const double> fidelity_by_l, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  std::optional<int> best;
  for (std::size_t i = fidelity_by_l.size(); i-- > 0;) {
    if (fidelity_by_l[i] < 1.0 - eps) break;
    best = static_cast<int>(i) + 1;
  }
  return best;
}

std::optional<int> l_epsilon(double lambda, int n_sites, double eps, double total_time,
                             TrajectoryCache& cache, const AnnealParams& params) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  std::vector<RunSpec> runs;
  for (int l = 1; l <= n_sites / 2; ++l) {
    AnnealParams p = params;
    p.n_sites = n_sites;
    p.l = l;
    runs.push_back({p, total_time});
  }
  cache.prefetch(runs);
  std::vector<double> fid;
  for (const auto& r : runs) fid.push_back(cache.fidelity_at(r.params, total_time, lambda));
  return l_epsilon_from(fid, eps);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least squares needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least squares needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace iqa
