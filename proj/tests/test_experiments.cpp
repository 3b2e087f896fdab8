#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "iqa/experiments.hpp"

using namespace iqa::experiments;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("iqa_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parses lists, ranges and defaults") {
  const auto cfg = parse(
      "# sweep\n"
      "scenario = fidelity-map\n"
      "N_list = 20, 10\n"
      "l_list = 1..3, 5   # trailing comment\n"
      "T_list = 100, 50.5\n");
  CHECK(cfg.scenario == Scenario::FidelityMap);
  CHECK(cfg.n_list == std::vector<int>{10, 20});
  CHECK(cfg.l_list == std::vector<int>{1, 2, 3, 5});
  CHECK(cfg.t_list == std::vector<double>{50.5, 100});
  CHECK(cfg.lambda_points == 201);
  CHECK(cfg.epsilon == 0.005);
  CHECK(cfg.steps_per_unit_time == 10.0);
  CHECK(cfg.lambda_list.empty());
}

TEST_CASE("config errors name the offending key") {
  const std::string base = "scenario = adiabaticity\nN_list = 10\nl_list = 2\nT_list = 10\n";
  CHECK(config_error_key(base + "colour = red\n") == "colour");
  CHECK(config_error_key(base + "N_list = 12\n") == "N_list");
  CHECK(config_error_key(base + "epsilon = 1.5\n") == "epsilon");
  CHECK(config_error_key(base + "lambda_points = 1\n") == "lambda_points");
  CHECK(config_error_key(base + "lambda_list = 0.333\n") == "lambda_list");
  CHECK(config_error_key(base + "steps_per_unit_time = 5\n") == "steps_per_unit_time");
  CHECK(config_error_key(base + "workers = -1\n") == "workers");
  CHECK(config_error_key("scenario = adiabaticity\nN_list = 9\nl_list = 2\nT_list = 10\n") == "N_list");
  CHECK(config_error_key("scenario = adiabaticity\nN_list = 10\nT_list = 10\n") == "l_list");
  CHECK(config_error_key("scenario = adiabaticity\nN_list = 10\nl_list = 2\n") == "T_list");
  CHECK(config_error_key("scenario = nope\n") == "scenario");
  CHECK(config_error_key("N_list = 10\n") == "scenario");
  CHECK(config_error_key("scenario = adiabaticity\nN_list = 10, x\nl_list = 2\nT_list = 10\n") ==
        "N_list");
  CHECK(config_error_key("scenario = adiabaticity\nN_list = 10\nl_list = 4..2\nT_list = 10\n") ==
        "l_list");
}

TEST_CASE("scenario-specific requirements") {
  CHECK(config_error_key("scenario = l-epsilon\nN_list = 10\nT_list = 10, 20\n") == "T_list");
  CHECK(config_error_key("scenario = l-epsilon\nN_list = 10\nl_list = 3\nT_list = 10\n") == "l_list");
  CHECK(config_error_key("scenario = oracle-check\nN_list = 12\nT_list = 10\n") == "N_list");
  CHECK_NOTHROW(parse("scenario = oracle-check\nN_list = 6\nT_list = 10\n"));
  CHECK_NOTHROW(parse("scenario = coupling-decay\nN_list = 10, 12\nT_list = 10\n"));
}

TEST_CASE("every scenario name round-trips") {
  for (auto s : all_scenarios()) CHECK(parse_scenario(scenario_name(s)) == s);
  CHECK(all_scenarios().size() == 8);
}

TEST_CASE("describe echoes a config that parses back to itself") {
  const auto cfg = parse(
      "scenario = l-epsilon\nN_list = 12, 10\nT_list = 40\nepsilon = 0.01\n"
      "lambda_list = 0.45, 0.55\nlambda_points = 21\n");
  const auto again = parse(describe(cfg));
  CHECK(describe(again) == describe(cfg));
  CHECK(again.n_list == std::vector<int>{10, 12});
  CHECK(again.lambda_list == cfg.lambda_list);
}

TEST_CASE("environment overrides output directory and workers") {
  auto cfg = parse("scenario = range-scaling\nN_list = 10\nT_list = 10\n");
  setenv("IQA_OUTPUT_DIR", "/tmp/elsewhere", 1);
  setenv("IQA_WORKERS", "3", 1);
  apply_environment(cfg);
  CHECK(cfg.output_dir == "/tmp/elsewhere");
  CHECK(cfg.workers == 3);
  setenv("IQA_WORKERS", "many", 1);
  CHECK_THROWS_AS(apply_environment(cfg), ConfigError);
  unsetenv("IQA_OUTPUT_DIR");
  unsetenv("IQA_WORKERS");
}

TEST_CASE("CSV uses 17 significant digits and nan for missing values") {
  ResultTable t{"x", {"N", "value"}, {{10, 0.1}, {12, std::nan("")}}};
  CHECK(to_csv(t) == "N,value\n10,0.10000000000000001\n12,nan\n");
  t.rows.push_back({1.0});
  CHECK_THROWS(to_csv(t));
}

TEST_CASE("adiabaticity rows are sorted and skip l above N/2") {
  const auto cfg = parse(
      "scenario = adiabaticity\nN_list = 8, 6\nl_list = 4, 1\nT_list = 20\nlambda_points = 5\n");
  const auto res = run(cfg);
  REQUIRE(res.tables.size() == 1);
  const auto& t = res.tables[0];
  CHECK(t.name == "distance");
  CHECK(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("l = 4 for N = 6") != std::string::npos);
  CHECK(t.rows.size() == 3 * 5);
  CHECK(t.rows.front()[0] == 6);
  CHECK(t.rows.back()[0] == 8);
  CHECK(t.rows.back()[1] == 4);
  CHECK(t.rows.front()[4] == 0.0);  // both runs start from the same couplings
}

TEST_CASE("max-r-scaling fits a slope per (N, l)") {
  const auto cfg = parse(
      "scenario = max-r-scaling\nN_list = 10\nl_list = 2\nT_list = 40, 80, 160\nlambda_points = 11\n");
  const auto t = run(cfg).tables.at(0);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][5] == t.rows[2][5]);
  CHECK(t.rows[0][5] < 0.0);
  CHECK(t.rows[2][4] < t.rows[0][4]);
}

TEST_CASE("l-epsilon writes nan when no range qualifies") {
  const auto cfg = parse(
      "scenario = l-epsilon\nN_list = 8\nT_list = 5\nlambda_list = 0.5, 1\nlambda_points = 5\n"
      "epsilon = 0.0001\n");
  const auto t = run(cfg).tables.at(0);
  REQUIRE(t.rows.size() == 2);
  CHECK(std::isnan(t.rows[0][3]));
}

TEST_CASE("oracle-check differences are at rounding level") {
  const auto cfg = parse(
      "scenario = oracle-check\nN_list = 4, 6\nT_list = 30\nlambda_list = 0, 0.5, 1\n"
      "lambda_points = 11\n");
  const auto t = run(cfg).tables.at(0);
  CHECK(t.rows.size() == (2 + 3) * 3);
  for (const auto& r : t.rows) {
    CHECK(r[3] <= 1e-10);
    CHECK(r[4] <= 1e-10);
  }
}

TEST_CASE("write produces the scenario directory and is reproducible") {
  const auto dir = scratch_dir("write");
  auto cfg = parse("scenario = coupling-decay\nN_list = 8, 10\nT_list = 20\nlambda_points = 3\n");
  cfg.output_dir = dir.string();
  const auto out = write(run(cfg), cfg);
  CHECK(out == dir / "coupling-decay");
  CHECK(fs::exists(out / "range_norms.csv"));
  const auto prov = slurp(out / "provenance.txt");
  CHECK(prov.rfind("# generated: ", 0) == 0);
  CHECK(prov.find("scenario = coupling-decay") != std::string::npos);
  const auto first = slurp(out / "range_norms.csv");
  write(run(cfg), cfg);
  CHECK(slurp(out / "range_norms.csv") == first);
  CHECK_FALSE(fs::exists(dir / "coupling-decay.partial"));
  fs::remove_all(dir);
}

TEST_CASE("execute maps failures to exit codes and leaves no partial output") {
  const auto dir = scratch_dir("exec");
  fs::create_directories(dir);
  std::ofstream(dir / "blocker") << "not a directory";
  auto cfg = parse("scenario = range-scaling\nN_list = 8\nT_list = 10\nlambda_points = 3\n");
  cfg.output_dir = (dir / "blocker").string();
  std::ostringstream out, err;
  CHECK(execute(cfg, out, err) == kExitNumerical);
  CHECK(fs::is_regular_file(dir / "blocker"));

  cfg.output_dir = dir.string();
  cfg.epsilon = 2.0;
  CHECK(execute(cfg, out, err) == kExitConfig);
  CHECK(err.str().find("epsilon") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "range-scaling"));

  cfg.epsilon = 0.005;
  CHECK(execute(cfg, out, err) == kExitOk);
  CHECK(fs::exists(dir / "range-scaling" / "range_scaling.csv"));
  fs::remove_all(dir);
}
