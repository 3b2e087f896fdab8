#pragma once

// Inverse-annealing coupling flow dh/dt = K^(l)(lambda(t)) h with lambda(t) = t/T.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iqa/commutator.hpp"
#include "iqa/model.hpp"

namespace iqa {

inline constexpr double kMaxTimeStep = 0.1;
inline constexpr double kNormDriftTolerance = 1e-6;
inline constexpr double kNormDriftFailure = 10.0 * kNormDriftTolerance;

/// Linear schedule lambda(t) = t / T.
class Schedule {
 public:
  explicit Schedule(double total_time);
  double total_time() const { return total_time_; }
  double lambda_at(double t) const;

 private:
  double total_time_;
};

struct IntegratorConfig {
  std::int64_t steps = 0;
  int sample_count = 0;

  /// Smallest step count >= T * steps_per_unit_time that the sample grid divides.
  static IntegratorConfig for_schedule(const Schedule& schedule, double steps_per_unit_time,
                                       int sample_count);
  void validate(const Schedule& schedule) const;
  std::int64_t stride() const { return steps / (sample_count - 1); }
};

struct TrajectorySample {
  double t;
  double lambda;
  Eigen::VectorXd h;
};

struct RunMeta {
  int n_sites = 0;
  int l = 0;
  double total_time = 0.0;
  std::int64_t steps = 0;
  double max_norm_drift = 0.0;   // relative to |h(0)|
  std::int64_t worst_step = 0;
};

struct Trajectory {
  BasisDescriptor basis;
  Schedule schedule{1.0};
  std::vector<TrajectorySample> samples;
  RunMeta meta;

  CouplingVector couplings(std::size_t i) const { return {basis, samples[i].h}; }
  std::vector<double> lambdas() const;
  /// Sample whose lambda equals the argument to within 1e-12.
  std::optional<std::size_t> index_of_lambda(double lambda) const;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(std::int64_t step, double drift);
  std::int64_t step() const { return step_; }
  double drift() const { return drift_; }

 private:
  std::int64_t step_;
  double drift_;
};

/// Fixed-step RK4 with the generator evaluated at t, t+dt/2 and t+dt.
/// Throws IntegrationError if the relative norm drift exceeds kNormDriftFailure.
Trajectory anneal(const CouplingVector& start, const Schedule& schedule,
                  const IntegratorConfig& cfg);

/// kitaev_couplings(0) normalized to unit length.
CouplingVector default_start(const BasisDescriptor& basis);

struct AnnealParams {
  int n_sites = 0;
  int l = 0;
  double steps_per_unit_time = 10.0;
  int sample_count = 201;
};

/// Default-start run of length T.
Trajectory anneal(const AnnealParams& params, double total_time);

/// Runs at T and 2T sharing the lambda sample grid.
std::pair<Trajectory, Trajectory> anneal_pair(const AnnealParams& params, double total_time);

struct RunSpec {
  AnnealParams params;
  double total_time = 0.0;
};

/// Independent runs distributed over OpenMP threads; output order matches input.
std::vector<Trajectory> anneal_batch(const std::vector<RunSpec>& runs, int workers = 0);

namespace reference {
std::vector<Trajectory> anneal_batch_serial(const std::vector<RunSpec>& runs);
}

/// Test hook: RK4 with the generator frozen at `lambda`, integrated to time t.
Eigen::VectorXd propagate_frozen(const FourierMatrix& fourier, double lambda,
                                 const Eigen::VectorXd& h0, double t, std::int64_t steps);

}  // namespace iqa
