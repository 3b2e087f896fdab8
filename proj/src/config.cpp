#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "iqa/experiments.hpp"
#include "iqa/oracle.hpp"

namespace iqa::experiments {

namespace {

struct ScenarioInfo {
  Scenario id;
  std::string_view name;
  bool single_t;     // one annealing time per run
  bool uses_l_list;  // false: the scenario fixes l itself
};

constexpr ScenarioInfo kScenarios[] = {
    {Scenario::Adiabaticity, "adiabaticity", false, true},
    {Scenario::MaxRScaling, "max-r-scaling", false, true},
    {Scenario::FidelityMap, "fidelity-map", false, true},
    {Scenario::FidelityVsL, "fidelity-vs-l", true, true},
    {Scenario::LEpsilon, "l-epsilon", true, false},
    {Scenario::CouplingDecay, "coupling-decay", true, false},
    {Scenario::RangeScaling, "range-scaling", true, false},
    {Scenario::OracleCheck, "oracle-check", true, true},
};

const ScenarioInfo& info(Scenario s) {
  for (const auto& i : kScenarios) {
    if (i.id == s) return i;
  }
  throw std::logic_error("unknown scenario id");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view key, std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t pos = 0;
  while (true) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos));
    if (item.empty()) throw ConfigError(std::string(key), "empty list item");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return items;
}

int parse_int(std::string_view key, std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  for (auto item : split_list(key, value)) {
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const int a = parse_int(key, trim(item.substr(0, dots)));
      const int b = parse_int(key, trim(item.substr(dots + 2)));
      if (b < a) throw ConfigError(std::string(key), "empty range '" + std::string(item) + "'");
      for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
      out.push_back(parse_int(key, item));
    }
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto item : split_list(key, value)) out.push_back(parse_real(key, item));
  return out;
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Shortest round-trip form, for echoing values back to the user.
std::string format_real(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("?");
}

}  // namespace

std::string_view scenario_name(Scenario s) { return info(s).name; }

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& i : kScenarios) {
    if (i.name == name) return i.id;
  }
  return std::nullopt;
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> v;
    for (const auto& i : kScenarios) v.push_back(i.id);
    return v;
  }();
  return all;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": missing key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "missing value");

    if (key == "scenario") {
      const auto sc = parse_scenario(value);
      if (!sc) throw ConfigError(key, "unknown scenario '" + std::string(value) + "'");
      cfg.scenario = *sc;
    } else if (key == "N_list") {
      cfg.n_list = parse_int_list(key, value);
    } else if (key == "l_list") {
      cfg.l_list = parse_int_list(key, value);
    } else if (key == "T_list") {
      cfg.t_list = parse_real_list(key, value);
    } else if (key == "lambda_list") {
      cfg.lambda_list = parse_real_list(key, value);
    } else if (key == "lambda_points") {
      cfg.lambda_points = parse_int(key, value);
    } else if (key == "epsilon") {
      cfg.epsilon = parse_real(key, value);
    } else if (key == "steps_per_unit_time") {
      cfg.steps_per_unit_time = parse_real(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else if (key == "workers") {
      cfg.workers = parse_int(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  if (seen.count("scenario") == 0) throw ConfigError("scenario", "required");

  sort_unique(cfg.n_list);
  sort_unique(cfg.l_list);
  sort_unique(cfg.t_list);
  sort_unique(cfg.lambda_list);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  return parse_config(in);
}

void apply_environment(ExperimentConfig& cfg) {
  if (const char* dir = std::getenv("IQA_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    cfg.output_dir = dir;
  }
  if (const char* w = std::getenv("IQA_WORKERS"); w != nullptr && *w != '\0') {
    cfg.workers = parse_int("IQA_WORKERS", trim(w));
    if (cfg.workers < 0) throw ConfigError("IQA_WORKERS", "must be >= 0");
  }
}

void validate(const ExperimentConfig& cfg) {
  const auto& sc = info(cfg.scenario);
  if (cfg.n_list.empty()) throw ConfigError("N_list", "required");
  for (int n : cfg.n_list) {
    if (n < 4 || n % 2 != 0) throw ConfigError("N_list", "N must be even and >= 4, got " + std::to_string(n));
    if (cfg.scenario == Scenario::OracleCheck && n > oracle::kMaxSites) {
      throw ConfigError("N_list", "oracle-check is limited to N <= " + std::to_string(oracle::kMaxSites));
    }
  }
  if (sc.uses_l_list) {
    if (cfg.l_list.empty() && cfg.scenario != Scenario::OracleCheck) {
      throw ConfigError("l_list", "required by scenario " + std::string(sc.name));
    }
    for (int l : cfg.l_list) {
      if (l < 1) throw ConfigError("l_list", "l must be >= 1, got " + std::to_string(l));
    }
  } else if (!cfg.l_list.empty()) {
    throw ConfigError("l_list", "not used by scenario " + std::string(sc.name));
  }
  if (cfg.t_list.empty()) throw ConfigError("T_list", "required");
  for (double t : cfg.t_list) {
    if (!(t > 0.0)) throw ConfigError("T_list", "annealing times must be > 0");
  }
  if (sc.single_t && cfg.t_list.size() != 1) {
    throw ConfigError("T_list", "scenario " + std::string(sc.name) + " takes exactly one T");
  }
  if (cfg.lambda_points < 2) throw ConfigError("lambda_points", "must be >= 2");
  for (double lam : cfg.lambda_list) {
    if (!(lam >= 0.0 && lam <= 1.0)) throw ConfigError("lambda_list", "values must lie in [0, 1]");
    const double pos = lam * (cfg.lambda_points - 1);
    if (std::abs(pos - std::round(pos)) > 1e-9) {
      throw ConfigError("lambda_list", format_real(lam) + " is not on the " +
                                           std::to_string(cfg.lambda_points) + "-point grid");
    }
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
  if (!(cfg.steps_per_unit_time >= 10.0)) {
    throw ConfigError("steps_per_unit_time", "must be >= 10 (time step <= 0.1)");
  }
  if (cfg.workers < 0) throw ConfigError("workers", "must be >= 0");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

std::string describe(const ExperimentConfig& cfg) {
  auto join_int = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  };
  auto join_real = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
    return s;
  };
  std::ostringstream os;
  os << "scenario = " << scenario_name(cfg.scenario) << '\n';
  os << "N_list = " << join_int(cfg.n_list) << '\n';
  if (!cfg.l_list.empty()) os << "l_list = " << join_int(cfg.l_list) << '\n';
  os << "T_list = " << join_real(cfg.t_list) << '\n';
  if (!cfg.lambda_list.empty()) os << "lambda_list = " << join_real(cfg.lambda_list) << '\n';
  os << "lambda_points = " << cfg.lambda_points << '\n';
  os << "epsilon = " << format_real(cfg.epsilon) << '\n';
  os << "steps_per_unit_time = " << format_real(cfg.steps_per_unit_time) << '\n';
  os << "output_dir = " << cfg.output_dir << '\n';
  os << "workers = " << cfg.workers << '\n';
  return os.str();
}

}  // namespace iqa::experiments
