#include "iqa/cache.hpp"

#include <cstdio>
#include <stdexcept>

#include "iqa/spectra.hpp"

namespace iqa {

std::string cache_key(const AnnealParams& params, double total_time) {
  const Schedule schedule(total_time);
  const auto cfg =
      IntegratorConfig::for_schedule(schedule, params.steps_per_unit_time, params.sample_count);
  char buf[256];
  std::snprintf(buf, sizeof buf, "N=%d;l=%d;T=%a;steps=%lld;samples=%d;shape=linear;start=kitaev0",
                params.n_sites, params.l, total_time, static_cast<long long>(cfg.steps),
                cfg.sample_count);
  return buf;
}

TrajectoryCache::Handle TrajectoryCache::get(const AnnealParams& params, double total_time) {
  const std::string key = cache_key(params, total_time);
  {
    std::lock_guard lock(mu_);
    if (auto it = runs_.find(key); it != runs_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto run = std::make_shared<const Trajectory>(anneal(params, total_time));
  std::lock_guard lock(mu_);
  ++misses_;
  // A concurrent caller may have inserted the same run; both are bit-identical.
  return runs_.try_emplace(key, std::move(run)).first->second;
}

void TrajectoryCache::prefetch(const std::vector<RunSpec>& runs, int workers) {
  std::vector<RunSpec> missing;
  std::vector<std::string> keys;
  {
    std::lock_guard lock(mu_);
    for (const auto& r : runs) {
      std::string key = cache_key(r.params, r.total_time);
      if (runs_.count(key) != 0) continue;
      bool queued = false;
      for (const auto& k : keys) queued = queued || k == key;
      if (queued) continue;
      keys.push_back(std::move(key));
      missing.push_back(r);
    }
  }
  auto done = anneal_batch(missing, workers);
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < done.size(); ++i) {
    ++misses_;
    runs_.try_emplace(keys[i], std::make_shared<const Trajectory>(std::move(done[i])));
  }
}

double TrajectoryCache::fidelity_at(const AnnealParams& params, double total_time, double lambda) {
  const Handle run = get(params, total_time);
  const auto idx = run->index_of_lambda(lambda);
  if (!idx) {
    throw std::invalid_argument("lambda " + std::to_string(lambda) +
                                " is not on the trajectory sample grid");
  }
  const auto key = std::make_pair(cache_key(params, total_time), *idx);
  {
    std::lock_guard lock(mu_);
    if (auto it = fidelities_.find(key); it != fidelities_.end()) return it->second;
  }
  const double f = fidelity(run->couplings(*idx), run->samples[*idx].lambda).fidelity;
  std::lock_guard lock(mu_);
  fidelities_.emplace(key, f);
  return f;
}

std::size_t TrajectoryCache::size() const {
  std::lock_guard lock(mu_);
  return runs_.size();
}

std::size_t TrajectoryCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::size_t TrajectoryCache::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

}  // namespace iqa
