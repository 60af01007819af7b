// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mmnoma/harness.hpp"
#include "support.hpp"

using namespace mmnoma;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig base_config(int users, int aps, int chains, int antennas) {
  ExperimentConfig c;
  c.venue = default_venue();
  c.users = users;
  c.aps = aps;
  c.rf_chains = chains;
  c.ap_antennas = antennas;
  c.p_total_dbm = 30.0;
  return c;
}

// 1 and 2 share instances.
struct MwcsStats {
  double mean_mwcs = 0.0, mean_opt = 0.0, mean_ratio = 0.0, mean_accepted = 0.0;
  double seconds = 0.0;
};

MwcsStats mwcs_vs_exhaustive() {
  const auto start = std::chrono::steady_clock::now();
  const PointContext ctx(base_config(8, 2, 2, 24));
  MwcsStats s;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    const Realization real = draw_realization(ctx, run);
    const LinkCache cache(real, ctx.config.ap_antennas, ctx.config.md_antennas,
                          ctx.config.channel.blocked_steering);
    const UniformPowerModel model(cache, ctx.pipeline.system);
    const MwcsResult m = mwcs(model, 2, ctx.pipeline.weights);
    const ScheduleOptimum opt = exhaustive_schedule_opt(model, 2);
    s.mean_mwcs += m.sum_rate / runs;
    s.mean_opt += opt.sum_rate / runs;
    s.mean_ratio += (opt.sum_rate > 0.0 ? m.sum_rate / opt.sum_rate : 1.0) / runs;
    s.mean_accepted += static_cast<double>(m.accepted_iterations) / runs;
  }
  s.seconds = test_support::seconds_since(start);
  return s;
}

Outcome criterion_sa() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = base_config(6, 2, 2, 12);
  c.min_antennas = 2;
  const PointContext ctx(c);
  int hits = 0, runs = 200, q_mismatch = 0;
  for (int run = 0; run < runs; ++run) {
    const Realization real = draw_realization(ctx, run);
    const LinkCache cache(real, c.ap_antennas, c.md_antennas, c.channel.blocked_steering);
    const UniformPowerModel model(cache, ctx.pipeline.system);
    const Schedule schedule = mwcs(model, 2, ctx.pipeline.weights).schedule;
    if (pair_groups(schedule).size() != 2) ++q_mismatch;
    Rng rng(derive_seed(run_seed(c.base_seed, run), {3}));
    const SaResult sa = sa_allocate(model, schedule, ctx.pipeline.sa, rng);
    const AntennaOptimum opt = exhaustive_antenna_opt(model, schedule);
    if (sa.sum_rate >= opt.sum_rate * (1.0 - 1e-12)) ++hits;
  }
  const double secs = test_support::seconds_since(start);
  const double share = static_cast<double>(hits) / runs;
  return {share >= 0.95 && q_mismatch == 0 && secs < 120.0,
          fmt("SA hit rate %.3f (>= 0.95), Q != 2 in %d runs, %.1f s (< 120 s)", share,
              q_mismatch, secs)};
}

Outcome criterion_three_stage_gap() {
  const auto start = std::chrono::steady_clock::now();
  const PointContext ctx(base_config(5, 2, 2, 12));
  const int runs = 50;
  double ours = 0.0, best = 0.0, mean_gap = 0.0;
  for (int run = 0; run < runs; ++run) {
    const Realization real = draw_realization(ctx, run);
    const LinkCache cache(real, ctx.config.ap_antennas, ctx.config.md_antennas,
                          ctx.config.channel.blocked_steering);
    Rng rng(derive_seed(run_seed(ctx.config.base_seed, run), {3}));
    const NomaResult noma = run_noma(cache, ctx.pipeline, rng);
    const FullOptimum full = full_exhaustive(cache, ctx.pipeline);
    ours += noma.sum_rate / runs;
    best += full.sum_rate / runs;
    mean_gap += (full.sum_rate > 0.0 ? 1.0 - noma.sum_rate / full.sum_rate : 0.0) / runs;
  }
  const double secs = test_support::seconds_since(start);
  const double gap = best > 0.0 ? 1.0 - ours / best : 0.0;
  return {gap >= 0.05 && gap <= 0.25 && secs < 900.0,
          fmt("three-stage %.3f vs exhaustive %.3f, gap %.2f%% (5-25%%), per-run mean gap "
              "%.2f%%, %.1f s (< 900 s)",
              ours, best, 100.0 * gap, 100.0 * mean_gap, secs)};
}

Outcome criterion_noma_vs_oma() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = base_config(20, 3, 4, 36);
  c.runs = 50;
  c.scheme = Scheme::Both;
  const ExperimentResult r = run_experiment(c);
  double noma = 0.0, oma = 0.0, noma_f = 0.0, oma_f = 0.0;
  int infeasible_noma = 0, infeasible_oma = 0;
  for (const SchemeSummary& s : r.summary) {
    if (s.scheme == "noma") {
      noma = s.mean;
      noma_f = s.mean_feasible_only;
      infeasible_noma = s.infeasible;
    } else if (s.scheme == "oma") {
      oma = s.mean;
      oma_f = s.mean_feasible_only;
      infeasible_oma = s.infeasible;
    }
  }
  const double secs = test_support::seconds_since(start);
  const double ratio = oma > 0.0 ? noma / oma : 0.0;
  return {ratio >= 1.10 && secs < 1200.0,
          fmt("NOMA %.3f / OMA %.3f = %.4f (>= 1.10); flagged runs %d/%d; feasible-only "
              "means %.3f / %.3f; %.1f s (< 1200 s)",
              noma, oma, ratio, infeasible_noma, infeasible_oma, noma_f, oma_f, secs)};
}

Outcome criterion_geometry() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240611);
  double worst_endpoint = 0.0, worst_measure = 0.0;
  int structure_mismatch = 0;
  const int configs = 1000;
  for (int i = 0; i < configs; ++i) {
    const test_support::GeometryCase g = test_support::random_geometry(rng);
    const ArcSet analytic = clear_set(g.subject, g.ap, g.others);
    const ArcSet cast = raycast_clear_set(g.subject, g.others, g.ap, 1'000'000);
    worst_measure = std::max(worst_measure, std::abs(analytic.measure() - cast.measure()));
    const double e = test_support::endpoint_distance(analytic, cast);
    if (std::isinf(e)) {
      ++structure_mismatch;
    } else {
      worst_endpoint = std::max(worst_endpoint, e);
    }
  }
  const double secs = test_support::seconds_since(start);
  return {structure_mismatch == 0 && worst_endpoint <= 1e-6 && worst_measure <= 1e-5 &&
              secs < 120.0,
          fmt("%d configs: worst endpoint %.2e rad (<= 1e-6), worst measure %.2e (<= 1e-5), "
              "arc-count mismatches %d, %.1f s (< 120 s)",
              configs, worst_endpoint, worst_measure, structure_mismatch, secs)};
}

Outcome criterion_dc() {
  const auto start = std::chrono::steady_clock::now();
  int instances = 0, attempts = 0;
  double worst_monotone = 0.0, worst_slack = 0.0, worst_grad = 0.0, worst_identity = 0.0;
  while (instances < 100 && attempts < 2000) {
    const test_support::DcInstance inst = test_support::random_dc_instance(attempts++);
    const DcResult dc = dc_power_allocate(inst.schedule, inst.gains, inst.sic, inst.noise,
                                          inst.total_power, inst.min_rates);
    if (!dc.feasible) continue;
    ++instances;
    for (std::size_t t = 1; t < dc.trace.size(); ++t)
      worst_monotone = std::max(worst_monotone, dc.trace[t] - dc.trace[t - 1]);
    worst_slack = std::min(worst_slack, test_support::nonlinear_slack(inst, dc.powers));

    const PowerProblem problem(inst.schedule, inst.gains, inst.sic, inst.noise, inst.total_power,
                               inst.min_rates);
    Rng prng(derive_seed(777, {static_cast<std::uint64_t>(attempts)}));
    std::vector<double> p(inst.schedule.users(), 0.0);
    for (int k : problem.users()) p[k] = prng.uniform(0.05, 1.0) * inst.total_power / 4.0;
    worst_grad = std::max(worst_grad, test_support::gradient_error(problem, p));
    const RateInputs in{inst.schedule, inst.gains, inst.sic, p, inst.noise};
    worst_identity =
        std::max(worst_identity, std::abs(problem.f1(p) - problem.f2(p) + sum_rate(in)));
  }
  const double secs = test_support::seconds_since(start);
  return {instances == 100 && worst_monotone <= 1e-9 && worst_slack >= -1e-6 &&
              worst_grad <= 1e-5 && worst_identity <= 1e-10,
          fmt("%d feasible instances: trace increase %.2e (<= 1e-9), slack %.2e (>= -1e-6), "
              "grad rel err %.2e (<= 1e-5), F1-F2+R %.2e (<= 1e-10), %.1f s",
              instances, worst_monotone, worst_slack, worst_grad, worst_identity, secs)};
}

Outcome criterion_zf() {
  Rng rng(99);
  double worst = 0.0;
  int regularized = 0;
  for (int i = 0; i < 100; ++i) {
    const test_support::ZfInstance z = test_support::random_zf_instance(rng, 2 + i % 5);
    const ZfPrecoder zf = zf_precoder(z.eff, z.schedule);
    if (zf.regularized) ++regularized;
    const CMatrix& H = zf.equivalent[0];
    const CMatrix product = H.adjoint() * zf.unnormalized[0];
    const CMatrix diff = product - CMatrix::Identity(product.rows(), product.cols());
    worst = std::max(worst, diff.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return {worst < 1e-9 && regularized == 0,
          fmt("100 instances: max ||H^H G - I||_inf = %.2e (< 1e-9), regularized %d", worst,
              regularized)};
}

Outcome criterion_goldens() {
  const double pl = path_loss(10.0, 2.25, 60e9);
  const CVector a = array_response(kPi / 2.0, 4);
  bool ones = a.size() == 4;
  for (int i = 0; i < a.size(); ++i) ones = ones && a(i) == cplx(1.0, 0.0);
  const double closed = count_schedules(8, 2, 2);
  long long enumerated = 0;
  enumerate_schedules(8, 2, 2, [&](const Schedule&) { ++enumerated; });
  return {std::abs(pl - 8.9029e-10) <= 1e-13 && ones && closed == 630.0 && enumerated == 630,
          fmt("path_loss(10 m) = %.6e (8.9029e-10 +- 1e-13), array_response(pi/2, 4) all ones "
              "%s, count %g closed form / %lld enumerated (630)",
              pl, ones ? "yes" : "no", closed, enumerated)};
}

Outcome criterion_determinism() {
  ExperimentConfig c = base_config(12, 3, 2, 24);
  c.runs = 6;
  auto csv = [&](int workers) {
    c.workers = workers;
    std::ostringstream out;
    write_csv(run_experiment(c), out);
    return out.str();
  };
  const std::string a = csv(1), b = csv(1), w = csv(3);
  return {a == b && a == w && !a.empty(),
          fmt("repeat identical: %s, 3 workers identical: %s (%zu bytes)", a == b ? "yes" : "no",
              a == w ? "yes" : "no", a.size())};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const Outcome& o) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  const MwcsStats m = mwcs_vs_exhaustive();
  const double ratio = m.mean_opt > 0.0 ? m.mean_mwcs / m.mean_opt : 1.0;
  report("1 mwcs-near-optimal",
         {ratio >= 0.95 && m.mean_ratio >= 0.95 && m.seconds < 300.0,
          fmt("MWCS %.3f / exhaustive %.3f = %.4f, mean per-run ratio %.4f (>= 0.95), %.1f s "
              "(< 300 s)",
              m.mean_mwcs, m.mean_opt, ratio, m.mean_ratio, m.seconds)});
  report("2 mwcs-iterations",
         {m.mean_accepted <= 30.0,
          fmt("mean accepted iterations %.2f (<= 30)", m.mean_accepted)});
  report("3 sa-optimal", criterion_sa());
  report("4 three-stage-gap", criterion_three_stage_gap());
  report("5 noma-over-oma", criterion_noma_vs_oma());
  report("6 geometry-oracle", criterion_geometry());
  report("7 dc-properties", criterion_dc());
  report("8 zf-identity", criterion_zf());
  report("9 goldens", criterion_goldens());
  report("10 determinism", criterion_determinism());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
