#include "mmnoma/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

namespace mmnoma {

namespace {

struct SweepPoint {
  std::optional<double> value;
  ExperimentConfig config;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& base) {
  std::vector<SweepPoint> points;
  if (base.sweep_axis == SweepAxis::None) {
    points.push_back({std::nullopt, base});
    return points;
  }
  for (double v : base.sweep_values) {
    ExperimentConfig c = base;
    switch (base.sweep_axis) {
      case SweepAxis::PTotal: c.p_total_dbm = v; break;
      case SweepAxis::MAp: c.ap_antennas = static_cast<int>(v); break;
      case SweepAxis::B: c.aps = static_cast<int>(v); break;
      case SweepAxis::None: break;
    }
    points.push_back({v, c});
  }
  return points;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<RunRow> run_one(const PointContext& ctx, const std::optional<double>& sweep, int run) {
  const ExperimentConfig& c = ctx.config;
  const std::uint64_t seed = run_seed(c.base_seed, run);
  const Realization real = draw_realization(ctx, run);
  const LinkCache cache(real, c.ap_antennas, c.md_antennas, c.channel.blocked_steering);
  const PipelineConfig& pc = ctx.pipeline;

  std::vector<RunRow> rows;
  auto row = [&](const std::string& scheme, double rate, bool feasible) {
    RunRow r;
    r.run = run;
    r.scheme = scheme;
    r.sweep_value = sweep;
    r.sum_rate = rate;
    r.feasible = feasible;
    r.seed = seed;
    return r;
  };

  std::optional<NomaResult> noma;
  if (c.scheme != Scheme::Oma || c.oracle == OracleMode::Full) {
    const auto start = std::chrono::steady_clock::now();
    Rng sa_rng(derive_seed(seed, {3}));
    noma = run_noma(cache, pc, sa_rng);
    RunRow r = row("noma", noma->sum_rate, noma->feasible);
    r.user_rates = noma->stage3.dc.report.user_rates;
    r.mwcs_iterations = noma->stage1.accepted_iterations;
    r.elapsed_seconds = seconds_since(start);
    if (c.scheme != Scheme::Oma) rows.push_back(std::move(r));
  }
  if (c.scheme != Scheme::Noma) {
    const auto start = std::chrono::steady_clock::now();
    const UniformPowerModel model(cache, pc.system);
    const Schedule schedule =
        noma ? noma->stage1.schedule : mwcs(model, pc.system.rf_chains, pc.weights).schedule;
    const OmaResult oma = oma_allocate(cache, pc.system, schedule, pc.dc);
    RunRow r = row("oma", oma.sum_rate, oma.feasible);
    r.user_rates = oma.user_rates;
    r.elapsed_seconds = seconds_since(start);
    rows.push_back(std::move(r));
  }

  if (c.oracle != OracleMode::None) {
    const UniformPowerModel model(cache, pc.system);
    const MwcsResult stage1 = noma ? noma->stage1 : mwcs(model, pc.system.rf_chains, pc.weights);
    if (c.oracle == OracleMode::Schedule) {
      const ScheduleOptimum best =
          exhaustive_schedule_opt(model, pc.system.rf_chains, c.enumeration_cap);
      rows.push_back(row("stage1_mwcs", stage1.sum_rate, true));
      rows.push_back(row("stage1_exhaustive", best.sum_rate, true));
    } else if (c.oracle == OracleMode::Antenna) {
      Rng sa_rng(derive_seed(seed, {3}));
      const SaResult sa = sa_allocate(model, stage1.schedule, pc.sa, sa_rng);
      const AntennaOptimum best = exhaustive_antenna_opt(model, stage1.schedule, c.enumeration_cap);
      rows.push_back(row("stage2_sa", sa.sum_rate, true));
      rows.push_back(row("stage2_exhaustive", best.sum_rate, true));
    } else {
      const FullOptimum best = full_exhaustive(cache, pc, c.enumeration_cap);
      rows.push_back(row("full_exhaustive", best.sum_rate, best.feasible));
    }
  }
  return rows;
}

void append_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

PointContext::PointContext(const ExperimentConfig& c)
    : config(c), scenario(build_scenario(c)), pipeline(pipeline_config(c)) {
  aps = c.aps > 0 ? static_cast<std::size_t>(c.aps) : scenario.aps.size();
  // Only the APs in use cast clear sets.
  VenueScenario used = scenario;
  used.aps.resize(aps);
  table = ClearSetTable(used);
}

Realization draw_realization(const PointContext& ctx, int run) {
  const ExperimentConfig& c = ctx.config;
  const std::uint64_t seed = run_seed(c.base_seed, run);
  Rng seat_rng(derive_seed(seed, {0}));
  const auto seats = sample_seats(ctx.scenario.seats.size(), c.users, seat_rng);
  RealizationOptions opt;
  opt.ap_antennas = c.ap_antennas;
  opt.channel = c.channel;
  opt.blockage = c.blockage;
  return realize(ctx.scenario, ctx.table, seats, ctx.aps, opt, derive_seed(seed, {10}));
}

std::uint64_t run_seed(std::uint64_t base_seed, int run) {
  return base_seed ^ static_cast<std::uint64_t>(run);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  for (const SweepPoint& point : sweep_points(config)) {
    const PointContext ctx(point.config);

    const int runs = point.config.runs;
    std::vector<std::vector<RunRow>> per_run(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next++; i < runs; i = next++) {
        try {
          per_run[i] = run_one(ctx, point.value, i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const int workers = std::max(1, std::min(point.config.workers, runs));
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    for (int i = 0; i < runs; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      for (RunRow& r : per_run[i]) result.rows.push_back(std::move(r));
    }
  }
  result.summary = summarize(result.rows);
  return result;
}

std::vector<SchemeSummary> summarize(const std::vector<RunRow>& rows) {
  std::vector<SchemeSummary> out;
  std::map<std::pair<std::size_t, std::string>, std::vector<const RunRow*>> groups;
  std::vector<std::optional<double>> sweep_order;
  std::vector<std::string> scheme_order;
  auto index_of = [](auto& list, const auto& value) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i] == value) return i;
    list.push_back(value);
    return list.size() - 1;
  };
  for (const RunRow& r : rows) {
    const std::size_t s = index_of(sweep_order, r.sweep_value);
    index_of(scheme_order, r.scheme);
    groups[{s, r.scheme}].push_back(&r);
  }
  for (std::size_t s = 0; s < sweep_order.size(); ++s) {
    for (const std::string& scheme : scheme_order) {
      auto it = groups.find({s, scheme});
      if (it == groups.end()) continue;
      SchemeSummary sum;
      sum.scheme = scheme;
      sum.sweep_value = sweep_order[s];
      sum.runs = static_cast<int>(it->second.size());
      double total = 0.0, feasible_total = 0.0;
      for (const RunRow* r : it->second) {
        total += r->sum_rate;
        if (r->feasible) {
          feasible_total += r->sum_rate;
        } else {
          ++sum.infeasible;
        }
      }
      sum.mean = total / sum.runs;
      double var = 0.0;
      for (const RunRow* r : it->second) var += (r->sum_rate - sum.mean) * (r->sum_rate - sum.mean);
      sum.standard_error = sum.runs > 1 ? std::sqrt(var / (sum.runs - 1) / sum.runs) : 0.0;
      const int feasible = sum.runs - sum.infeasible;
      sum.mean_feasible_only = feasible > 0 ? feasible_total / feasible
                                            : std::numeric_limits<double>::quiet_NaN();
      out.push_back(sum);
    }
  }
  return out;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  std::string text = "run,scheme,sweep_value,sum_rate,feasible,seed\n";
  for (const RunRow& r : result.rows) {
    text += std::to_string(r.run);
    text += ',';
    text += r.scheme;
    text += ',';
    if (r.sweep_value) append_number(text, *r.sweep_value);
    text += ',';
    append_number(text, r.sum_rate);
    text += r.feasible ? ",1," : ",0,";
    text += std::to_string(r.seed);
    text += '\n';
  }
  out << text;
}

nlohmann::json metadata(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::json summary = nlohmann::json::array();
  for (const SchemeSummary& s : result.summary) {
    nlohmann::json item = {{"scheme", s.scheme},
                           {"runs", s.runs},
                           {"infeasible", s.infeasible},
                           {"infeasible_fraction", static_cast<double>(s.infeasible) / s.runs},
                           {"mean_sum_rate", s.mean},
                           {"standard_error", s.standard_error}};
    item["sweep_value"] = s.sweep_value ? nlohmann::json(*s.sweep_value) : nlohmann::json(nullptr);
    item["mean_sum_rate_feasible_only"] = std::isnan(s.mean_feasible_only)
                                              ? nlohmann::json(nullptr)
                                              : nlohmann::json(s.mean_feasible_only);
    summary.push_back(item);
  }
  return {{"format", "mmnoma-results/1"},
          {"seeding", "run seed = base_seed XOR run; streams via splitmix64; engine mt19937_64"},
          {"config", to_json(config)},
          {"rows", result.rows.size()},
          {"summary", summary}};
}

void emit_results(const ExperimentConfig& config, const ExperimentResult& result,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "results.csv").string());
    write_csv(result, csv);
    if (!csv) throw std::runtime_error("write failed for " + (dir / "results.csv").string());
  }
  std::ofstream meta(dir / "metadata.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + (dir / "metadata.json").string());
  meta << metadata(config, result).dump(2) << '\n';
  if (!meta) throw std::runtime_error("write failed for " + (dir / "metadata.json").string());
}

bool all_runs_infeasible(const ExperimentResult& result) {
  bool any = false;
  for (const RunRow& r : result.rows) {
    if (r.scheme != "noma" && r.scheme != "oma") continue;
    any = true;
    if (r.feasible) return false;
  }
  return any;
}

}  // namespace mmnoma
