#pragma once

// Instance generators and checks shared by the unit and acceptance tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "mmnoma/config.hpp"
#include "mmnoma/harness.hpp"
#include "mmnoma/oracle.hpp"
#include "mmnoma/power.hpp"
#include "mmnoma/realization.hpp"
#include "mmnoma/rng.hpp"
#include "mmnoma/venue.hpp"

namespace test_support {

using namespace mmnoma;

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline double circular_distance(double a, double b) {
  return std::abs(angle_difference(a, b));
}

// Largest endpoint mismatch between matched maximal arcs; infinity when the
// arc counts differ.
inline double endpoint_distance(const ArcSet& a, const ArcSet& b) {
  if (a.is_full() && b.is_full()) return 0.0;
  if (a.empty() && b.empty()) return 0.0;
  const auto xa = a.arcs(), xb = b.arcs();
  if (xa.size() != xb.size() || a.is_full() != b.is_full()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (const Arc& p : xa) {
    double best = std::numeric_limits<double>::infinity();
    for (const Arc& q : xb) {
      best = std::min(best, std::max(circular_distance(p.start, q.start),
                                     circular_distance(p.end, q.end)));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

struct GeometryCase {
  UserPlacement subject;
  std::vector<UserPlacement> others;
  AccessPoint ap;
};

inline GeometryCase random_geometry(Rng& rng) {
  const BodyModel body;
  const double platforms[] = {0.0, 0.15, 0.30, 0.45};
  GeometryCase g;
  g.subject = make_seat(0.0, 0.0, platforms[rng.uniform_index(4)], body);
  const int count = static_cast<int>(rng.uniform_index(9));
  while (static_cast<int>(g.others.size()) < count) {
    const double d = rng.uniform(2.0 * body.body_radius + 1e-3, 3.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    g.others.push_back(
        make_seat(d * std::cos(phi), d * std::sin(phi), platforms[rng.uniform_index(4)], body));
  }
  for (;;) {
    const double d = rng.uniform(1.0, 12.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    const Position3 p{d * std::cos(phi), d * std::sin(phi), 4.0};
    bool clear = true;
    for (const auto& o : g.others)
      clear = clear && horizontal_distance(p, o.seat) > body.body_radius + 0.05;
    if (!clear) continue;
    g.ap.position = p;
    return g;
  }
}

// Random synthetic power-allocation instance with at most six users.
struct DcInstance {
  Schedule schedule;
  GainTable gains;
  SicOrder sic;
  double noise = 1e-11;
  double total_power = 1.0;
  std::vector<double> min_rates;
};

inline DcInstance random_dc_instance(int index) {
  Rng rng(derive_seed(4242, {static_cast<std::uint64_t>(index)}));
  const int aps = 1 + static_cast<int>(rng.uniform_index(2));
  const int chains = 2 + static_cast<int>(rng.uniform_index(2));
  const int users = std::min(6, 2 + static_cast<int>(rng.uniform_index(5)));
  DcInstance inst;
  inst.schedule = Schedule(users, aps, chains);
  for (int k = 0; k < users; ++k) {
    for (int tries = 0; tries < 100; ++tries) {
      const int b = static_cast<int>(rng.uniform_index(aps));
      const int n = static_cast<int>(rng.uniform_index(chains));
      if (inst.schedule.group_size(b, n) < 2) {
        inst.schedule.assign(k, b, n);
        break;
      }
    }
  }
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
  };
  inst.gains = GainTable(users, aps, chains);
  std::vector<double> strength(users);
  for (int k = 0; k < users; ++k) {
    strength[k] = log_uniform(1e-10, 1e-7);
    for (int b = 0; b < aps; ++b)
      for (int n = 0; n < chains; ++n) {
        const bool own = inst.schedule.c(k, b, n);
        const bool same_ap = inst.schedule.ap_of(k) == b;
        inst.gains.at(k, b, n) = own       ? log_uniform(1e-9, 1e-6)
                                 : same_ap ? log_uniform(1e-14, 1e-11)
                                           : log_uniform(1e-12, 1e-9);
      }
  }
  // Keep the effective gains of each pair in SIC order half of the time.
  if (rng.uniform() < 0.5) {
    for (const auto& [b, n] : pair_groups(inst.schedule)) {
      const auto m = inst.schedule.members(b, n);
      const int first = m[0], second = m[1];
      const bool first_strong = inst.gains.at(first, b, n) >= inst.gains.at(second, b, n);
      if (first_strong != (strength[first] >= strength[second]))
        std::swap(strength[first], strength[second]);
    }
  }
  inst.sic = sic_order(strength);
  inst.min_rates.assign(users, 0.25);
  return inst;
}

// Smallest slack of the budget, SIC and QoS constraints in their original
// rate form. Budget slack is relative to the budget.
inline double nonlinear_slack(const DcInstance& inst, const std::vector<double>& powers) {
  const RateInputs in{inst.schedule, inst.gains, inst.sic, powers, inst.noise};
  double total = 0.0, slack = std::numeric_limits<double>::infinity();
  for (double p : powers) {
    total += p;
    slack = std::min(slack, p / inst.total_power);
  }
  slack = std::min(slack, (inst.total_power - total) / inst.total_power);
  for (const PairRef& pr : sic_pairs(inst.schedule, inst.sic))
    slack = std::min(slack, cross_rate(pr.strong, pr.weak, in) - user_rate(pr.weak, in));
  for (int k = 0; k < inst.schedule.users(); ++k)
    if (inst.schedule.scheduled(k)) slack = std::min(slack, user_rate(k, in) - inst.min_rates[k]);
  return slack;
}

// max |analytic - central difference| / max |analytic| over scheduled users.
inline double gradient_error(const PowerProblem& problem, std::vector<double> p) {
  const std::vector<double> g = problem.grad_f2(p);
  double scale = 0.0, err = 0.0;
  for (int k : problem.users()) scale = std::max(scale, std::abs(g[k]));
  for (int k : problem.users()) {
    // Smaller steps are swamped by rounding in F2 itself.
    const double h = 1e-4 * std::max(p[k], 1e-3 * problem.total_power());
    const double keep = p[k];
    p[k] = keep + h;
    const double up = problem.f2(p);
    p[k] = keep - h;
    const double down = problem.f2(p);
    p[k] = keep;
    err = std::max(err, std::abs((up - down) / (2.0 * h) - g[k]));
  }
  return scale > 0.0 ? err / scale : err;
}

struct ZfInstance {
  Schedule schedule;
  EffectiveChannels eff;
};

// One AP with `chains` groups (singletons or pairs) and random effective
// channels, resampled until the equivalent matrix is well conditioned.
inline ZfInstance random_zf_instance(Rng& rng, int chains) {
  for (;;) {
    std::vector<int> sizes(chains);
    int users = 0;
    for (int& s : sizes) users += (s = 1 + static_cast<int>(rng.uniform_index(2)));
    ZfInstance z;
    z.schedule = Schedule(users, 1, chains);
    int k = 0;
    for (int n = 0; n < chains; ++n)
      for (int i = 0; i < sizes[n]; ++i) z.schedule.assign(k++, 0, n);
    z.eff.users = users;
    z.eff.aps = 1;
    z.eff.chains = chains;
    for (int u = 0; u < users; ++u) {
      CVector h(chains);
      for (int n = 0; n < chains; ++n) h(n) = rng.complex_normal();
      z.eff.h.push_back(h);
    }
    CMatrix H(chains, chains);
    for (int n = 0; n < chains; ++n) H.col(n) = group_equivalent_channel(z.eff, z.schedule, 0, n);
    Eigen::JacobiSVD<CMatrix> svd(H);
    const auto& s = svd.singularValues();
    if (s(0) / s(chains - 1) < 1e3) return z;
  }
}

// Realization with hand-placed devices and APs. los[k][b] picks the LoS
// indicator of each link.
inline Realization synthetic_realization(const std::vector<Position3>& devices,
                                         const std::vector<Position3>& aps,
                                         const std::vector<std::vector<bool>>& los,
                                         int ap_antennas, int nlos_paths, std::uint64_t seed) {
  Realization r;
  r.users = devices.size();
  r.aps = aps.size();
  r.devices = devices;
  ChannelParams params;
  params.nlos_paths = nlos_paths;
  Rng rng(seed);
  for (std::size_t k = 0; k < devices.size(); ++k)
    for (std::size_t b = 0; b < aps.size(); ++b)
      r.links.push_back(sample_channel(devices[k], aps[b], los[k][b], ap_antennas, params, rng));
  return r;
}

// Default venue at 30 dBm with the given dimensions.
inline ExperimentConfig small_config(int users, int aps, int chains, int antennas) {
  ExperimentConfig c;
  c.venue = default_venue();
  c.users = users;
  c.aps = aps;
  c.rf_chains = chains;
  c.ap_antennas = antennas;
  c.runs = 1;
  return c;
}

}  // namespace test_support
