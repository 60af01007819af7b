#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmnoma/metrics.hpp"
#include "mmnoma/oracle.hpp"
#include "support.hpp"

using namespace mmnoma;

namespace {

struct Instance {
  Schedule schedule;
  GainTable gains;
  SicOrder sic;
  std::vector<double> powers;
  double noise = 1e-11;
};

// Two APs, two chains: AP 0 holds a pair and a singleton, AP 1 a pair.
Instance random_instance(Rng& rng) {
  Instance in;
  in.schedule = Schedule(5, 2, 2);
  in.schedule.assign(0, 0, 0);
  in.schedule.assign(3, 0, 0);
  in.schedule.assign(1, 0, 1);
  in.schedule.assign(2, 1, 0);
  in.schedule.assign(4, 1, 0);
  in.gains = GainTable(5, 2, 2);
  for (int k = 0; k < 5; ++k)
    for (int b = 0; b < 2; ++b)
      for (int n = 0; n < 2; ++n) in.gains.at(k, b, n) = std::exp(rng.uniform(-25.0, -16.0));
  std::vector<double> strength(5);
  for (double& s : strength) s = rng.uniform();
  in.sic = sic_order(strength);
  in.powers.resize(5);
  for (double& p : in.powers) p = rng.uniform(0.0, 0.3);
  return in;
}

RateInputs inputs(const Instance& in) {
  return {in.schedule, in.gains, in.sic, in.powers, in.noise};
}

// Rate of user k written out term by term: every transmitted symbol other
// than k's own is interference unless it belongs to a weaker user of k's
// own group (cancelled by SIC).
double oracle_rate(const Instance& in, int k) {
  const Schedule& s = in.schedule;
  const int b = s.ap_of(k), n = s.chain_of(k);
  double interference = 0.0;
  for (int j = 0; j < s.users(); ++j) {
    if (j == k || !s.scheduled(j)) continue;
    const int bj = s.ap_of(j), nj = s.chain_of(j);
    const bool same_group = bj == b && nj == n;
    if (same_group && in.sic.rank[j] > in.sic.rank[k]) continue;
    interference += in.gains.at(k, bj, nj) * in.powers[j];
  }
  return std::log2(1.0 + in.gains.at(k, b, n) * in.powers[k] / (interference + in.noise));
}

}  // namespace

TEST_CASE("schedule bookkeeping") {
  Schedule s(4, 2, 1);
  s.assign(3, 0, 0);
  s.assign(1, 0, 0);
  CHECK(s.members(0, 0)[0] == 1);
  CHECK(s.members(0, 0)[1] == 3);
  CHECK_THROWS_AS(s.assign(0, 0, 0), CapacityError);
  CHECK_THROWS_AS(s.assign(1, 1, 0), CapacityError);
  CHECK_THROWS_AS(s.assign(2, 2, 0), CapacityError);
  s.unassign(1);
  CHECK(s.group_size(0, 0) == 1);
  CHECK(s.members(0, 0)[0] == 3);
  CHECK_FALSE(s.scheduled(1));
  CHECK(s.scheduled_count() == 1);
  s.assign(0, 0, 0);
  CHECK(s.users_of_ap(0) == std::vector<int>{0, 3});
  CHECK(s.scheduled_users() == std::vector<int>{0, 3});
}

TEST_CASE("SIC order") {
  const std::vector<double> g{1e-9, 5e-9, 3e-9};
  const SicOrder s = sic_order(g);
  CHECK(s.order == std::vector<int>{1, 2, 0});
  CHECK(s.rank == std::vector<int>{2, 0, 1});
  CHECK(s.stronger(1, 0));
  const std::vector<double> tie{2.0, 2.0, 2.0};
  CHECK(sic_order(tie).order == std::vector<int>{0, 1, 2});
}

TEST_CASE("single link has no interference") {
  Schedule s(1, 1, 1);
  s.assign(0, 0, 0);
  GainTable g(1, 1, 1);
  g.at(0, 0, 0) = 2e-9;
  const std::vector<double> strength{1.0};
  const SicOrder sic = sic_order(strength);
  std::vector<double> p{0.5};
  const RateInputs in{s, g, sic, p, 1e-9};
  const auto t = interference_terms(0, in);
  CHECK(t.intra == 0.0);
  CHECK(t.inter_group == 0.0);
  CHECK(t.inter_ap == 0.0);
  CHECK(user_rate(0, in) == doctest::Approx(1.0));
  p[0] = 0.0;
  CHECK(user_rate(0, in) == 0.0);
}

TEST_CASE("weak member hears the strong member") {
  Schedule s(2, 1, 1);
  s.assign(0, 0, 0);
  s.assign(1, 0, 0);
  GainTable g(2, 1, 1);
  g.at(0, 0, 0) = 1e-8;
  g.at(1, 0, 0) = 1e-9;
  const std::vector<double> strength{1.0, 2.0};  // user 1 decodes first
  const SicOrder sic = sic_order(strength);
  const std::vector<double> p{0.3, 0.7};
  const RateInputs in{s, g, sic, p, 1e-11};
  CHECK(interference_terms(0, in).intra == doctest::Approx(0.7 * 1e-8));
  CHECK(interference_terms(1, in).intra == 0.0);
  CHECK(cross_rate(1, 0, in) ==
        doctest::Approx(std::log2(1.0 + 0.3e-9 / (0.7e-9 + 1e-11))));
  CHECK_THROWS_AS(cross_rate(0, 0, in), ModelError);
}

TEST_CASE("rates match the term-by-term oracle") {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = random_instance(rng);
    const RateInputs ri = inputs(in);
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double expected = oracle_rate(in, k);
      REQUIRE(std::abs(user_rate(k, ri) - expected) < 1e-10);
      total += expected;
    }
    REQUIRE(std::abs(sum_rate(ri) - total) < 1e-10);
    const RateReport rep = evaluate_rates(ri);
    REQUIRE(rep.sum_rate == doctest::Approx(total));
    REQUIRE(rep.pairs.size() == 2);
    bool ok = true;
    for (const auto& pr : rep.pairs) ok = ok && pr.weak_rate <= pr.cross_rate;
    REQUIRE(rep.sic_ok == ok);
    REQUIRE(sic_feasible(ri) == ok);
  }
}

TEST_CASE("rate properties") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    Instance in = random_instance(rng);
    const std::vector<double> base = [&] {
      std::vector<double> r;
      for (int k = 0; k < 5; ++k) r.push_back(user_rate(k, inputs(in)));
      return r;
    }();
    for (double r : base) REQUIRE(r >= 0.0);

    // Own power up, own rate not down.
    Instance more = in;
    const int k = static_cast<int>(rng.uniform_index(5));
    more.powers[k] *= 1.5;
    REQUIRE(user_rate(k, inputs(more)) >= base[k] - 1e-12);

    // Silencing AP 1 helps everyone on AP 0.
    Instance quiet = in;
    quiet.powers[2] = quiet.powers[4] = 0.0;
    for (int j : {0, 1, 3}) REQUIRE(user_rate(j, inputs(quiet)) >= base[j] - 1e-12);

    // Scaling powers and noise together.
    Instance scaled = in;
    for (double& p : scaled.powers) p *= 37.0;
    scaled.noise *= 37.0;
    for (int j = 0; j < 5; ++j) REQUIRE(std::abs(user_rate(j, inputs(scaled)) - base[j]) < 1e-12);
  }
}

TEST_CASE("SIC holds for aligned channels") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    Instance in = random_instance(rng);
    // Make each weak member a scaled-down copy of its strong partner.
    for (const PairRef& p : sic_pairs(in.schedule, in.sic)) {
      const double c = rng.uniform(0.05, 0.95);
      for (int b = 0; b < 2; ++b)
        for (int n = 0; n < 2; ++n) in.gains.at(p.weak, b, n) = c * in.gains.at(p.strong, b, n);
    }
    REQUIRE(sic_feasible(inputs(in), 1e-12));
  }
}

TEST_CASE("decomposition matches the received-signal expansion") {
  const auto cfg = test_support::small_config(6, 2, 2, 12);
  const PointContext ctx(cfg);
  Rng rng(54);
  for (int run = 0; run < 10; ++run) {
    const Realization real = draw_realization(ctx, run);
    const LinkCache cache(real, 12, 15);
    const UniformPowerModel model(cache, ctx.pipeline.system);
    const Schedule s = mwcs(model, 2, {}).schedule;
    const auto antennas = model.equal_split(s);
    const auto beams = build_beams(cache, s, antennas);
    const auto eff = effective_channels(cache, s, beams);
    const ZfPrecoder zf = zf_precoder(eff, s);
    const GainTable gains = gain_table(eff, s, &zf.precoders);
    const auto strengths = sic_strengths(cache, s);
    const SicOrder sic = sic_order(strengths);
    std::vector<double> p(6);
    for (double& x : p) x = rng.uniform(0.0, 0.2);
    const RateInputs in{s, gains, sic, p, 1e-11};
    for (int k : s.scheduled_users()) {
      const SignalExpansion e = expand_received_signal(k, real, s, p, beams, zf.precoders,
                                                       strengths, 15);
      const InterferenceTerms t = interference_terms(k, in);
      const double desired = gains.at(k, s.ap_of(k), s.chain_of(k)) * p[k];
      const double scale = desired + t.total() + 1e-30;
      REQUIRE(std::abs(e.desired - desired) <= 1e-12 * scale);
      REQUIRE(std::abs(e.interference.intra - t.intra) <= 1e-12 * scale);
      REQUIRE(std::abs(e.interference.inter_group - t.inter_group) <= 1e-12 * scale);
      REQUIRE(std::abs(e.interference.inter_ap - t.inter_ap) <= 1e-12 * scale);
    }
  }
}
