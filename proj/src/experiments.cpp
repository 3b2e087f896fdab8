#include "iqa/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>

#include "iqa/annealer.hpp"
#include "iqa/cache.hpp"
#include "iqa/commutator.hpp"
#include "iqa/metrics.hpp"
#include "iqa/oracle.hpp"
#include "iqa/spectra.hpp"

namespace iqa::experiments {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg) {}

  RunResult operator()() {
    switch (cfg_.scenario) {
      case Scenario::Adiabaticity: adiabaticity(); break;
      case Scenario::MaxRScaling: max_r_scaling(); break;
      case Scenario::FidelityMap: fidelity_map(); break;
      case Scenario::FidelityVsL: fidelity_vs_l(); break;
      case Scenario::LEpsilon: l_epsilon_table(); break;
      case Scenario::CouplingDecay: coupling_decay(); break;
      case Scenario::RangeScaling: range_scaling(); break;
      case Scenario::OracleCheck: oracle_check(); break;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", max_drift_);
    result_.notes.push_back(std::string("max_relative_norm_drift = ") + buf);
    return std::move(result_);
  }

 private:
  AnnealParams params(int n, int l) const {
    return {n, l, cfg_.steps_per_unit_time, cfg_.lambda_points};
  }

  // l_list entries that fit N, warning once per skipped (N, l).
  std::vector<int> ranges_for(int n) {
    std::vector<int> out;
    if (cfg_.l_list.empty()) {
      for (int l = 1; l <= n / 2; ++l) out.push_back(l);
      return out;
    }
    for (int l : cfg_.l_list) {
      if (l <= n / 2) {
        out.push_back(l);
      } else {
        result_.warnings.push_back("skipping l = " + std::to_string(l) + " for N = " +
                                   std::to_string(n) + " (l > N/2)");
      }
    }
    return out;
  }

  void fetch(const std::vector<RunSpec>& runs) {
    if (runs.empty()) throw ConfigError("l_list", "no admissible (N, l) pair (every l exceeds N/2)");
    cache_.prefetch(runs, cfg_.workers);
  }

  TrajectoryCache::Handle get(const AnnealParams& p, double t) {
    auto h = cache_.get(p, t);
    max_drift_ = std::max(max_drift_, h->meta.max_norm_drift);
    return h;
  }

  std::vector<std::size_t> sample_indices(const Trajectory& tr) const {
    std::vector<std::size_t> idx;
    if (cfg_.lambda_list.empty()) {
      for (std::size_t i = 0; i < tr.samples.size(); ++i) idx.push_back(i);
      return idx;
    }
    for (double lam : cfg_.lambda_list) {
      const auto i = tr.index_of_lambda(lam);
      if (!i) throw ConfigError("lambda_list", "value not on the sample grid");
      idx.push_back(*i);
    }
    return idx;
  }

  std::vector<RunSpec> pair_runs() {
    std::vector<RunSpec> runs;
    for (int n : cfg_.n_list) {
      for (int l : ranges_for(n)) {
        for (double t : cfg_.t_list) {
          runs.push_back({params(n, l), t});
          runs.push_back({params(n, l), 2.0 * t});
        }
      }
    }
    return runs;
  }

  std::vector<RunSpec> single_runs(bool full_range_only = false) {
    std::vector<RunSpec> runs;
    for (int n : cfg_.n_list) {
      const auto ls = full_range_only ? std::vector<int>{n / 2} : ranges_for(n);
      for (int l : ls) {
        for (double t : cfg_.t_list) runs.push_back({params(n, l), t});
      }
    }
    return runs;
  }

  void adiabaticity() {
    const auto runs = pair_runs();
    fetch(runs);
    ResultTable table{"distance", {"N", "l", "T", "lambda", "R"}, {}};
    for (std::size_t i = 0; i < runs.size(); i += 2) {
      const auto a = get(runs[i].params, runs[i].total_time);
      const auto b = get(runs[i + 1].params, runs[i + 1].total_time);
      const auto r = distance_profile(*a, *b);
      for (auto k : sample_indices(*a)) {
        table.rows.push_back({double(runs[i].params.n_sites), double(runs[i].params.l),
                              runs[i].total_time, a->samples[k].lambda, r[k]});
      }
    }
    result_.tables.push_back(std::move(table));
  }

  void max_r_scaling() {
    const auto runs = pair_runs();
    fetch(runs);
    ResultTable table{"max_distance", {"N", "l", "T", "lambda_star", "R_max", "fitted_slope"}, {}};
    const std::size_t per_group = 2 * cfg_.t_list.size();
    for (std::size_t g = 0; g < runs.size(); g += per_group) {
      std::vector<double> log_t, log_r;
      std::vector<std::vector<double>> rows;
      for (std::size_t i = g; i < g + per_group; i += 2) {
        const auto peak = max_R(*get(runs[i].params, runs[i].total_time),
                                *get(runs[i + 1].params, runs[i + 1].total_time));
        rows.push_back({double(runs[i].params.n_sites), double(runs[i].params.l),
                        runs[i].total_time, peak.lambda_star, peak.r_max, kNaN});
        log_t.push_back(std::log(runs[i].total_time));
        log_r.push_back(std::log(peak.r_max));
      }
      const double slope = log_t.size() >= 2 ? least_squares(log_t, log_r).slope : kNaN;
      for (auto& row : rows) {
        row.back() = slope;
        table.rows.push_back(std::move(row));
      }
    }
    result_.tables.push_back(std::move(table));
  }

  void fidelity_map() {
    const auto runs = single_runs();
    fetch(runs);
    ResultTable table{"fidelity_map",
                      {"N", "l", "T", "lambda", "fidelity", "degenerate_mode_count"}, {}};
    for (const auto& run : runs) {
      const auto tr = get(run.params, run.total_time);
      const FourierMatrix fourier(tr->basis);
      for (auto k : sample_indices(*tr)) {
        const auto rep = fidelity(tr->couplings(k), tr->samples[k].lambda, fourier);
        table.rows.push_back({double(run.params.n_sites), double(run.params.l), run.total_time,
                              tr->samples[k].lambda, rep.fidelity, double(rep.degenerate_modes.size())});
      }
    }
    result_.tables.push_back(std::move(table));
  }

  void fidelity_vs_l() {
    const auto runs = single_runs();
    fetch(runs);
    ResultTable table{"fidelity_vs_l", {"N", "l", "lambda", "fidelity"}, {}};
    for (const auto& run : runs) {
      const auto tr = get(run.params, run.total_time);
      const FourierMatrix fourier(tr->basis);
      for (auto k : sample_indices(*tr)) {
        const double f = fidelity(tr->couplings(k), tr->samples[k].lambda, fourier).fidelity;
        table.rows.push_back(
            {double(run.params.n_sites), double(run.params.l), tr->samples[k].lambda, f});
      }
    }
    result_.tables.push_back(std::move(table));
  }

  void l_epsilon_table() {
    const auto runs = single_runs();
    fetch(runs);
    const double t = cfg_.t_list.front();
    ResultTable table{"l_epsilon", {"N", "lambda", "epsilon", "l_epsilon"}, {}};
    for (int n : cfg_.n_list) {
      const auto first = get(params(n, 1), t);
      for (auto k : sample_indices(*first)) {
        const double lam = first->samples[k].lambda;
        std::vector<double> by_l;
        for (int l = 1; l <= n / 2; ++l) {
          max_drift_ = std::max(max_drift_, get(params(n, l), t)->meta.max_norm_drift);
          by_l.push_back(cache_.fidelity_at(params(n, l), t, lam));
        }
        const auto le = l_epsilon_from(by_l, cfg_.epsilon);
        table.rows.push_back({double(n), lam, cfg_.epsilon, le ? double(*le) : kNaN});
      }
    }
    result_.notes.push_back("l_epsilon = nan: no l <= N/2 reaches fidelity 1 - epsilon");
    result_.tables.push_back(std::move(table));
  }

  void coupling_decay() {
    const auto runs = single_runs(true);
    fetch(runs);
    ResultTable table{"range_norms", {"N", "lambda", "r", "norm_h_r"}, {}};
    for (const auto& run : runs) {
      const auto tr = get(run.params, run.total_time);
      for (auto k : sample_indices(*tr)) {
        const auto prof = range_profile(tr->couplings(k));
        for (std::size_t r = 0; r < prof.norms.size(); ++r) {
          table.rows.push_back(
              {double(run.params.n_sites), tr->samples[k].lambda, double(r), prof.norms[r]});
        }
      }
    }
    result_.notes.push_back("couplings: non-projected flow (l = N/2) from the lambda = 0 Kitaev point");
    result_.tables.push_back(std::move(table));
  }

  void range_scaling() {
    const auto runs = single_runs(true);
    fetch(runs);
    ResultTable table{"range_scaling", {"N", "lambda", "r_avg_h", "r_avg_K"}, {}};
    for (const auto& run : runs) {
      const auto tr = get(run.params, run.total_time);
      const FourierMatrix fourier(tr->basis);
      for (auto k : sample_indices(*tr)) {
        const double lam = tr->samples[k].lambda;
        table.rows.push_back({double(run.params.n_sites), lam, r_avg_h(tr->couplings(k)),
                              r_avg_K(commutator_matrix(lam, fourier))});
      }
    }
    result_.notes.push_back("couplings: non-projected flow (l = N/2) from the lambda = 0 Kitaev point");
    result_.notes.push_back(
        "r_avg_K: |i - j| is the distance between label positions in the canonical basis order "
        "(0Z, 1X, 1Y, 1Z, 2X, ...)");
    result_.tables.push_back(std::move(table));
  }

  void oracle_check() {
    const auto runs = single_runs();
    fetch(runs);
    ResultTable table{"oracle_check", {"N", "l", "lambda", "max_abs_K_diff", "fidelity_diff"}, {}};
    for (const auto& run : runs) {
      const auto tr = get(run.params, run.total_time);
      const FourierMatrix fourier(tr->basis);
      for (auto k : sample_indices(*tr)) {
        const double lam = tr->samples[k].lambda;
        const auto analytic = commutator_matrix(lam, fourier);
        const auto dense = oracle::dense_commutator_matrix(lam, run.params.n_sites, run.params.l);
        const double dk = (analytic.entries - dense).cwiseAbs().maxCoeff();
        const auto h = tr->couplings(k);
        const double df =
            std::abs(fidelity(h, lam, fourier).fidelity - oracle::dense_ground_overlap(h, lam));
        table.rows.push_back({double(run.params.n_sites), double(run.params.l), lam, dk, df});
      }
    }
    result_.notes.push_back("couplings: annealed trajectory samples; dense side is exact diagonalization");
    result_.tables.push_back(std::move(table));
  }

  const ExperimentConfig& cfg_;
  TrajectoryCache cache_;
  RunResult result_;
  double max_drift_ = 0.0;
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  if (!out) throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
}

}  // namespace

std::string_view version() { return IQA_VERSION; }

std::string to_csv(const ResultTable& table) {
  std::string s;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) s += ',';
    s += table.columns[c];
  }
  s += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("ragged result table " + table.name);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      if (std::isnan(row[c])) {
        s += "nan";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", row[c]);
        s += buf;
      }
    }
    s += '\n';
  }
  return s;
}

RunResult run(const ExperimentConfig& cfg) {
  validate(cfg);
  return Runner(cfg)();
}

fs::path write(const RunResult& result, const ExperimentConfig& cfg) {
  const fs::path root(cfg.output_dir);
  const std::string name(scenario_name(cfg.scenario));
  const fs::path final_dir = root / name;
  const fs::path staging = root / (name + ".partial");
  try {
    fs::remove_all(staging);
    fs::create_directories(staging);
    for (const auto& t : result.tables) write_file(staging / (t.name + ".csv"), to_csv(t));

    std::string prov;
    prov += "# generated: " + timestamp_utc() + "\n";
    prov += "version = " + std::string(version()) + "\n";
    prov += "\n[config]\n" + describe(cfg);
    prov += "\n[notes]\n";
    for (const auto& n : result.notes) prov += n + "\n";
    if (!result.warnings.empty()) {
      prov += "\n[warnings]\n";
      for (const auto& w : result.warnings) prov += w + "\n";
    }
    write_file(staging / "provenance.txt", prov);

    fs::remove_all(final_dir);
    fs::rename(staging, final_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return final_dir;
}

int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto result = run(cfg);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    const auto dir = write(result, cfg);
    for (const auto& t : result.tables) {
      out << (dir / (t.name + ".csv")).string() << " (" << t.rows.size() << " rows)\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IntegrationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const oracle::DegeneracyError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace iqa::experiments
