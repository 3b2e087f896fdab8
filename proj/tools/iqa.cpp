// iqa: run, validate or oracle-check inverse-annealing experiments.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iqa/experiments.hpp"

namespace ex = iqa::experiments;

namespace {

int load(const std::string& path, ex::ExperimentConfig& cfg) {
  try {
    cfg = ex::load_config(path);
    ex::apply_environment(cfg);
    ex::validate(cfg);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ex::kExitConfig;
  }
  return ex::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse quantum annealing of Kitaev-chain parent Hamiltonians"};
  app.set_version_flag("--version", std::string(ex::version()));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Execute the scenario described by a config file");
  run->add_option("--config", config_path, "key = value config file")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a config file and print the resolved values");
  validate->add_option("--config", validate_path, "key = value config file")->required();

  int oracle_n = 6;
  double oracle_t = 100.0;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Compare analytic and dense results on a small chain");
  oracle->add_option("--n", oracle_n, "chain length (even, 4..10)")->required();
  oracle->add_option("--T", oracle_t, "annealing time of the sampled couplings")->capture_default_str();
  oracle->add_option("--output-dir", oracle_out, "output directory (default: results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the config-error exit code.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ex::kExitConfig;
  }

  ex::ExperimentConfig cfg;
  if (*run) {
    if (const int rc = load(config_path, cfg); rc != ex::kExitOk) return rc;
    return ex::execute(cfg, std::cout, std::cerr);
  }
  if (*validate) {
    if (const int rc = load(validate_path, cfg); rc != ex::kExitOk) return rc;
    std::cout << ex::describe(cfg);
    return ex::kExitOk;
  }

  cfg.scenario = ex::Scenario::OracleCheck;
  cfg.n_list = {oracle_n};
  cfg.t_list = {oracle_t};
  cfg.lambda_list = {0.0, 0.25, 0.5, 0.75, 1.0};
  if (!oracle_out.empty()) cfg.output_dir = oracle_out;
  try {
    ex::apply_environment(cfg);
    ex::validate(cfg);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ex::kExitConfig;
  }
  return ex::execute(cfg, std::cout, std::cerr);
}
