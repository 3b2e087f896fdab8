#pragma once

// Experiment catalog: config parsing, parameter sweeps and CSV output.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iqa::experiments {

enum class Scenario {
  Adiabaticity,
  MaxRScaling,
  FidelityMap,
  FidelityVsL,
  LEpsilon,
  CouplingDecay,
  RangeScaling,
  OracleCheck,
};

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();

struct ExperimentConfig {
  Scenario scenario = Scenario::Adiabaticity;
  std::vector<int> n_list;
  std::vector<int> l_list;          // empty: scenario default
  std::vector<double> t_list;
  std::vector<double> lambda_list;  // empty: every grid point
  int lambda_points = 201;
  double epsilon = 0.005;
  double steps_per_unit_time = 10.0;
  std::string output_dir = "results";
  int workers = 0;  // 0: OpenMP default
};

/// Bad or inconsistent configuration; key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// `key = value` lines; '#' starts a comment. Lists are comma separated and
/// integer lists accept inclusive ranges "a..b". Unknown or repeated keys
/// are errors. The result is validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// IQA_OUTPUT_DIR and IQA_WORKERS override the file values when set.
void apply_environment(ExperimentConfig& cfg);

/// Checks ranges and per-scenario requirements; throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// Resolved configuration in the same key = value syntax.
std::string describe(const ExperimentConfig& cfg);

/// All cells are numeric; integer-valued columns print without a fraction
/// and missing values print as nan.
struct ResultTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const ResultTable& table);

struct RunResult {
  std::vector<ResultTable> tables;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  // extra provenance lines
};

/// Computes a scenario without touching the filesystem.
RunResult run(const ExperimentConfig& cfg);

/// Writes <output_dir>/<scenario>/{tables,provenance.txt}. The directory is
/// assembled under a temporary name and renamed into place, so a failed run
/// never leaves partial outputs.
std::filesystem::path write(const RunResult& result, const ExperimentConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// run + write with errors mapped to exit codes and reported on `err`.
int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

std::string_view version();

}  // namespace iqa::experiments
