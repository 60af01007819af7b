// Command-line front end: runs an experiment from a JSON config and writes
// results.csv and metadata.json.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mmnoma/harness.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw mmnoma::ConfigError("--sweep: bad value '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw mmnoma::ConfigError("--sweep: empty value list");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-AP mmWave NOMA resource allocation simulator"};
  std::string config_path;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::vector<std::string> sweep;
  std::optional<std::string> oracle;
  std::string out_dir = "results";
  std::optional<int> workers;

  app.add_option("--config", config_path, "Experiment config (JSON)")->required();
  app.add_option("--runs", runs, "Number of Monte Carlo runs");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--scheme", scheme, "noma, oma or both");
  app.add_option("--sweep", sweep, "Sweep axis (p_total, M_AP, B) and comma-separated values")
      ->expected(2);
  app.add_option("--oracle", oracle, "schedule, antenna or full");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--workers", workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  mmnoma::ExperimentConfig config;
  try {
    config = mmnoma::load_config(config_path);
    if (runs) config.runs = *runs;
    if (seed) config.base_seed = *seed;
    if (scheme) config.scheme = mmnoma::parse_scheme(*scheme);
    if (oracle) config.oracle = mmnoma::parse_oracle(*oracle);
    if (workers) config.workers = *workers;
    if (!sweep.empty()) {
      config.sweep_axis = mmnoma::parse_sweep_axis(sweep[0]);
      config.sweep_values = parse_list(sweep[1]);
    }
    mmnoma::validate(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    const mmnoma::ExperimentResult result = mmnoma::run_experiment(config);
    mmnoma::emit_results(config, result, out_dir);
    for (const auto& s : result.summary) {
      std::printf("%-18s sweep=%-8s runs=%-4d mean=%.6f se=%.6f infeasible=%d\n",
                  s.scheme.c_str(),
                  s.sweep_value ? std::to_string(*s.sweep_value).c_str() : "-", s.runs, s.mean,
                  s.standard_error, s.infeasible);
    }
    if (mmnoma::all_runs_infeasible(result)) {
      std::cerr << "warning: every run was infeasible\n";
      return 3;
    }
  } catch (const mmnoma::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
