#include "mmnoma/antenna.hpp"

#include <cmath>
#include <numeric>

namespace mmnoma {

void validate(const SaConfig& c) {
  if (!(c.eps1 > 0.0) || !(c.t0 > c.eps1)) throw ConfigError("sa: need t0 > eps1 > 0");
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("sa: beta must lie in (0, 1)");
  if (c.tmax < 1) throw ConfigError("sa: tmax must be >= 1");
}

int cooling_steps(const SaConfig& config) {
  validate(config);
  int steps = 0;
  for (double t = config.t0; t >= config.eps1; t *= config.beta) ++steps;
  return steps;
}

std::vector<int> neighbor(std::span<const int> m, int lo, int hi, Rng& rng) {
  std::vector<int> out(m.begin(), m.end());
  const int q = static_cast<int>(m.size());
  if (q == 0) return out;
  const int changes = q == 1 ? 1 : rng.uniform_int(1, q - 1);
  std::vector<int> positions(q);
  std::iota(positions.begin(), positions.end(), 0);
  for (int i = 0; i < changes; ++i) {
    const int j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(q - i)));
    std::swap(positions[i], positions[j]);
    out[positions[i]] = rng.uniform_int(lo, hi);
  }
  return out;
}

SaResult sa_allocate(const UniformPowerModel& model, const Schedule& schedule,
                     const SaConfig& config, Rng& rng) {
  validate(config);
  SaResult res;
  const int ap_antennas = model.system().ap_antennas;
  const int q = static_cast<int>(pair_groups(schedule).size());
  if (q == 0) {
    res.sum_rate = model.sum_rate(schedule);
    return res;
  }
  const int lo = model.system().resolved_min_antennas();
  const int hi = ap_antennas - lo;
  if (lo > hi) throw ConfigError("sa: minimum antennas exceed half the array");

  auto rate_of = [&](const std::vector<int>& m) {
    ++res.evaluations;
    return model.sum_rate(schedule, antennas_from_split(schedule, m, ap_antennas));
  };

  std::vector<int> m(q, ap_antennas / 2);
  double r = rate_of(m);
  std::vector<int> best_m = m;
  double best_r = r;
  for (double t = config.t0; t >= config.eps1; t *= config.beta) {
    for (int step = 0; step < config.tmax; ++step) {
      std::vector<int> cand = neighbor(m, lo, hi, rng);
      const double r_new = rate_of(cand);
      const double delta = r > 0.0 ? (r - r_new) / r : 0.0;
      if (r_new >= r) {
        r = r_new;
        m = std::move(cand);
      } else if (rng.uniform() < std::exp(-delta / t)) {
        r = r_new;
        m = std::move(cand);
      }
      if (r >= best_r) {
        best_r = r;
        best_m = m;
      }
    }
    res.trace.push_back({t, r, best_r});
  }
  res.split = std::move(best_m);
  res.sum_rate = best_r;
  return res;
}

}  // namespace mmnoma
