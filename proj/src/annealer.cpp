#include "iqa/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include <omp.h>

namespace iqa {

Schedule::Schedule(double total_time) : total_time_(total_time) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw std::invalid_argument("annealing time T must be positive and finite");
  }
}

double Schedule::lambda_at(double t) const { return std::clamp(t / total_time_, 0.0, 1.0); }

IntegratorConfig IntegratorConfig::for_schedule(const Schedule& schedule,
                                                double steps_per_unit_time, int sample_count) {
  if (sample_count < 2) throw std::invalid_argument("sample_count must be >= 2");
  if (!(steps_per_unit_time > 0.0)) throw std::invalid_argument("steps_per_unit_time must be positive");
  const auto intervals = static_cast<std::int64_t>(sample_count - 1);
  auto steps = static_cast<std::int64_t>(std::ceil(schedule.total_time() * steps_per_unit_time - 1e-9));
  steps = std::max<std::int64_t>(steps, intervals);
  steps = ((steps + intervals - 1) / intervals) * intervals;
  IntegratorConfig cfg{steps, sample_count};
  cfg.validate(schedule);
  return cfg;
}

void IntegratorConfig::validate(const Schedule& schedule) const {
  if (sample_count < 2) throw std::invalid_argument("sample_count must be >= 2");
  if (steps < sample_count - 1) throw std::invalid_argument("steps must be >= sample_count - 1");
  if (steps % (sample_count - 1) != 0) {
    throw std::invalid_argument("sample grid must divide the step count");
  }
  if (schedule.total_time() / static_cast<double>(steps) > kMaxTimeStep * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step T/steps exceeds " + std::to_string(kMaxTimeStep));
  }
}

std::vector<double> Trajectory::lambdas() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.lambda);
  return out;
}

std::optional<std::size_t> Trajectory::index_of_lambda(double lambda) const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i].lambda - lambda) <= 1e-12) return i;
  }
  return std::nullopt;
}

IntegrationError::IntegrationError(std::int64_t step, double drift)
    : std::runtime_error("coupling norm drift " + std::to_string(drift) + " exceeds " +
                         std::to_string(kNormDriftFailure) + " (worst at step " +
                         std::to_string(step) + ")"),
      step_(step),
      drift_(drift) {}

namespace {

struct Rk4Workspace {
  Eigen::VectorXd k1, k2, k3, k4, tmp;
  explicit Rk4Workspace(Eigen::Index n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

// One classical RK4 step; start/mid/end carry the generator at t, t+dt/2, t+dt.
inline void rk4_step(const CommutatorAction& start, const CommutatorAction& mid,
                     const CommutatorAction& end, double dt, Eigen::VectorXd& h,
                     Rk4Workspace& ws) {
  start.apply(h, ws.k1);
  ws.tmp = h + (0.5 * dt) * ws.k1;
  mid.apply(ws.tmp, ws.k2);
  ws.tmp = h + (0.5 * dt) * ws.k2;
  mid.apply(ws.tmp, ws.k3);
  ws.tmp = h + dt * ws.k3;
  end.apply(ws.tmp, ws.k4);
  h += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

}  // namespace

Trajectory anneal(const CouplingVector& start, const Schedule& schedule,
                  const IntegratorConfig& cfg) {
  cfg.validate(schedule);
  const FourierMatrix fourier(start.basis());
  CommutatorAction a0(fourier), a1(fourier), a2(fourier);
  CommutatorAction* at_start = &a0;
  CommutatorAction* at_mid = &a1;
  CommutatorAction* at_end = &a2;

  const double total = schedule.total_time();
  const std::int64_t steps = cfg.steps;
  const double dt = total / static_cast<double>(steps);
  const std::int64_t stride = cfg.stride();

  Trajectory traj;
  traj.basis = start.basis();
  traj.schedule = schedule;
  traj.samples.reserve(static_cast<std::size_t>(cfg.sample_count));
  traj.meta = {start.basis().n_sites(), start.basis().max_range(), total, steps, 0.0, 0};

  Eigen::VectorXd h = start.h();
  const double norm0 = h.norm();
  Rk4Workspace ws(h.size());
  traj.samples.push_back({0.0, 0.0, h});

  const double two_steps = 2.0 * static_cast<double>(steps);
  at_start->set_lambda(0.0);
  for (std::int64_t n = 0; n < steps; ++n) {
    // lambda = t/T evaluated from the step index; no accumulated rounding.
    at_mid->set_lambda(static_cast<double>(2 * n + 1) / two_steps);
    at_end->set_lambda(static_cast<double>(2 * (n + 1)) / two_steps);
    rk4_step(*at_start, *at_mid, *at_end, dt, h, ws);
    std::swap(at_start, at_end);

    if (norm0 > 0.0) {
      const double drift = std::abs(h.norm() - norm0) / norm0;
      if (drift > traj.meta.max_norm_drift) {
        traj.meta.max_norm_drift = drift;
        traj.meta.worst_step = n + 1;
      }
    }
    if ((n + 1) % stride == 0) {
      const double lam = static_cast<double>(n + 1) / static_cast<double>(steps);
      traj.samples.push_back({lam * total, lam, h});
    }
  }
  if (traj.meta.max_norm_drift > kNormDriftFailure) {
    throw IntegrationError(traj.meta.worst_step, traj.meta.max_norm_drift);
  }
  return traj;
}

CouplingVector default_start(const BasisDescriptor& basis) {
  return kitaev_couplings(0.0, basis).normalized();
}

Trajectory anneal(const AnnealParams& params, double total_time) {
  const BasisDescriptor basis(params.n_sites, params.l);
  const Schedule schedule(total_time);
  return anneal(default_start(basis), schedule,
                IntegratorConfig::for_schedule(schedule, params.steps_per_unit_time,
                                               params.sample_count));
}

std::pair<Trajectory, Trajectory> anneal_pair(const AnnealParams& params, double total_time) {
  auto runs = anneal_batch({{params, total_time}, {params, 2.0 * total_time}});
  return {std::move(runs[0]), std::move(runs[1])};
}

std::vector<Trajectory> anneal_batch(const std::vector<RunSpec>& runs, int workers) {
  std::vector<Trajectory> out(runs.size());
  std::exception_ptr failure;
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(runs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto& r = runs[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = anneal(r.params, r.total_time);
    } catch (...) {
#pragma omp critical(iqa_anneal_batch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace reference {

std::vector<Trajectory> anneal_batch_serial(const std::vector<RunSpec>& runs) {
  std::vector<Trajectory> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(anneal(r.params, r.total_time));
  return out;
}

}  // namespace reference

Eigen::VectorXd propagate_frozen(const FourierMatrix& fourier, double lambda,
                                 const Eigen::VectorXd& h0, double t, std::int64_t steps) {
  if (steps < 1) throw std::invalid_argument("propagate_frozen needs at least one step");
  CommutatorAction action(fourier);
  action.set_lambda(lambda);
  Eigen::VectorXd h = h0;
  Rk4Workspace ws(h.size());
  const double dt = t / static_cast<double>(steps);
  for (std::int64_t n = 0; n < steps; ++n) rk4_step(action, action, action, dt, h, ws);
  return h;
}

}  // namespace iqa
