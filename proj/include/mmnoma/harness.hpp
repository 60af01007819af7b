#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mmnoma/config.hpp"

namespace mmnoma {

/// One CSV row.
struct RunRow {
  int run = 0;
  std::string scheme;
  std::optional<double> sweep_value;
  double sum_rate = 0.0;
  bool feasible = true;
  std::uint64_t seed = 0;
  std::vector<double> user_rates;
  int mwcs_iterations = 0;     // accepted MWCS swaps (noma rows)
  double elapsed_seconds = 0;  // wall time of the scheme; kept out of the output files
};

struct SchemeSummary {
  std::string scheme;
  std::optional<double> sweep_value;
  int runs = 0;
  int infeasible = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double mean_feasible_only = 0.0;  // NaN when every run is infeasible
};

struct ExperimentResult {
  std::vector<RunRow> rows;
  std::vector<SchemeSummary> summary;
};

/// Per-run seed: base_seed XOR run index.
std::uint64_t run_seed(std::uint64_t base_seed, int run);

/// State shared by every run of one sweep point.
struct PointContext {
  explicit PointContext(const ExperimentConfig& config);
  ExperimentConfig config;
  VenueScenario scenario;
  ClearSetTable table;
  PipelineConfig pipeline;
  std::size_t aps = 0;  // APs in use
};

/// Seats, orientations, blockage and channels of one run. Seat sampling
/// uses stream {0} of the run seed, the realization stream {10}.
Realization draw_realization(const PointContext& ctx, int run);

/// Runs every sweep point and run index. Rows are ordered by sweep point,
/// run, then scheme, regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<SchemeSummary> summarize(const std::vector<RunRow>& rows);

void write_csv(const ExperimentResult& result, std::ostream& out);

/// Resolved config plus summary statistics; parse_config accepts it back.
nlohmann::json metadata(const ExperimentConfig& config, const ExperimentResult& result);

/// Writes results.csv and metadata.json into `dir` (created if missing).
void emit_results(const ExperimentConfig& config, const ExperimentResult& result,
                  const std::filesystem::path& dir);

/// True when there are scheme rows and every one of them is infeasible.
bool all_runs_infeasible(const ExperimentResult& result);

}  // namespace mmnoma
