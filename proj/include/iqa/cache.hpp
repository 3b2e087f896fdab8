#pragma once

// In-process store of annealing runs keyed by their full parameter set.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "iqa/annealer.hpp"

namespace iqa {

/// Injective encoding of (N, l, T, steps, samples, schedule shape). T is
/// written in hexadecimal floating point so distinct doubles never collide.
std::string cache_key(const AnnealParams& params, double total_time);

class TrajectoryCache {
 public:
  using Handle = std::shared_ptr<const Trajectory>;

  /// Cached run, computing it on a miss.
  Handle get(const AnnealParams& params, double total_time);

  /// Computes every missing run (OpenMP over runs) before returning.
  void prefetch(const std::vector<RunSpec>& runs, int workers = 0);

  /// Fidelity at a sampled lambda, memoized per (run, lambda index).
  double fidelity_at(const AnnealParams& params, double total_time, double lambda);

  std::size_t size() const;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Handle> runs_;
  std::map<std::pair<std::string, std::size_t>, double> fidelities_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace iqa
