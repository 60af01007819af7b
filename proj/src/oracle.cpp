#include "mmnoma/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace mmnoma {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Ways to split m labeled users into at most `chains` blocks of size <= 2.
double groupings(int m, int chains) {
  double total = 0.0;
  for (int pairs = std::max(0, m - chains); 2 * pairs <= m; ++pairs) {
    total += binomial(m, 2 * pairs) * factorial(2 * pairs) /
             (std::pow(2.0, pairs) * factorial(pairs));
  }
  return total;
}

double count_rec(int remaining, int ap, int aps, int chains) {
  if (ap == aps - 1) return remaining <= 2 * chains ? groupings(remaining, chains) : 0.0;
  double total = 0.0;
  for (int m = 0; m <= std::min(remaining, 2 * chains); ++m) {
    total += binomial(remaining, m) * groupings(m, chains) *
             count_rec(remaining - m, ap + 1, aps, chains);
  }
  return total;
}

struct Enumerator {
  int users;
  int aps;
  int chains;
  const std::function<void(const Schedule&)>& visit;
  Schedule schedule;
  std::vector<int> opened;  // groups opened per AP

  void run(int k) {
    if (k == users) {
      visit(schedule);
      return;
    }
    for (int b = 0; b < aps; ++b) {
      for (int n = 0; n < opened[b]; ++n) {
        if (schedule.group_size(b, n) != 1) continue;
        schedule.assign(k, b, n);
        run(k + 1);
        schedule.unassign(k);
      }
      if (opened[b] < chains) {
        schedule.assign(k, b, opened[b]++);
        run(k + 1);
        schedule.unassign(k);
        --opened[b];
      }
    }
  }
};

struct Seg {
  double x;
  double y;
};

// Overlap of the parameter range where p + t (a - p), t in [0, 1], lies
// strictly inside the circle (c, r).
double inside_overlap(Seg p, Seg a, Seg c, double r) {
  const double dx = a.x - p.x, dy = a.y - p.y;
  const double fx = p.x - c.x, fy = p.y - c.y;
  const double qa = dx * dx + dy * dy;
  const double qb = 2.0 * (fx * dx + fy * dy);
  const double qc = fx * fx + fy * fy - r * r;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (qa == 0.0 || disc <= 0.0) return 0.0;
  const double s = std::sqrt(disc);
  const double t1 = (-qb - s) / (2.0 * qa), t2 = (-qb + s) / (2.0 * qa);
  return std::max(0.0, std::min(t2, 1.0) - std::max(t1, 0.0));
}

}  // namespace

double count_schedules(int users, int aps, int chains) {
  if (users < 0 || aps < 1 || chains < 1) throw ConfigError("count_schedules: bad dimensions");
  return count_rec(users, 0, aps, chains);
}

double fully_loaded_count(int aps, int chains) {
  const int k = 2 * aps * chains;
  const double per_ap = factorial(2 * chains) / (std::pow(2.0, chains) * factorial(chains));
  return factorial(k) / std::pow(factorial(2 * chains), aps) * std::pow(per_ap, aps);
}

void enumerate_schedules(int users, int aps, int chains,
                         const std::function<void(const Schedule&)>& visit, double cap) {
  const double count = count_schedules(users, aps, chains);
  if (count > cap) {
    throw EnumerationLimitError("schedule enumeration exceeds the configured cap", count);
  }
  Enumerator e{users, aps, chains, visit, Schedule(users, aps, chains),
               std::vector<int>(aps, 0)};
  e.run(0);
}

ScheduleOptimum exhaustive_schedule_opt(const UniformPowerModel& model, int chains, double cap) {
  ScheduleOptimum best;
  bool found = false;
  enumerate_schedules(model.cache().users(), model.cache().aps(), chains,
                      [&](const Schedule& s) {
                        ++best.visited;
                        const double r = model.sum_rate(s);
                        if (!found || r > best.sum_rate) {
                          found = true;
                          best.sum_rate = r;
                          best.schedule = s;
                        }
                      },
                      cap);
  return best;
}

namespace {

// Visits {lo..hi}^q in lexicographic order.
template <typename F>
void for_each_split(int q, int lo, int hi, F&& f) {
  std::vector<int> m(q, lo);
  while (true) {
    f(m);
    int i = q - 1;
    while (i >= 0 && m[i] == hi) m[i--] = lo;
    if (i < 0) return;
    ++m[i];
  }
}

}  // namespace

AntennaOptimum exhaustive_antenna_opt(const UniformPowerModel& model, const Schedule& schedule,
                                      double cap) {
  const int q = static_cast<int>(pair_groups(schedule).size());
  const int ap_antennas = model.system().ap_antennas;
  const int lo = model.system().resolved_min_antennas(), hi = ap_antennas - lo;
  AntennaOptimum best;
  if (q == 0) {
    best.sum_rate = model.sum_rate(schedule);
    best.visited = 1;
    return best;
  }
  const double count = std::pow(hi - lo + 1.0, q);
  if (count > cap) throw EnumerationLimitError("antenna enumeration exceeds the cap", count);
  bool found = false;
  for_each_split(q, lo, hi, [&](const std::vector<int>& m) {
    ++best.visited;
    const double r = model.sum_rate(schedule, antennas_from_split(schedule, m, ap_antennas));
    if (!found || r > best.sum_rate) {
      found = true;
      best.sum_rate = r;
      best.split = m;
    }
  });
  return best;
}

FullOptimum full_exhaustive(const LinkCache& cache, const PipelineConfig& config, double cap) {
  const SystemConfig& sys = config.system;
  const int lo = sys.resolved_min_antennas(), hi = sys.ap_antennas - lo;
  FullOptimum best;
  bool found = false;
  enumerate_schedules(
      cache.users(), cache.aps(), sys.rf_chains,
      [&](const Schedule& s) {
        const int q = static_cast<int>(pair_groups(s).size());
        auto consider = [&](const std::vector<int>& m) {
          ++best.visited;
          const auto antennas = antennas_from_split(s, m, sys.ap_antennas);
          const Stage3Result r = run_stage3(cache, sys, s, antennas, config.dc);
          const bool better =
              !found || (r.dc.feasible && !best.feasible) ||
              (r.dc.feasible == best.feasible && r.dc.report.sum_rate > best.sum_rate);
          if (better) {
            found = true;
            best.schedule = s;
            best.split = m;
            best.sum_rate = r.dc.report.sum_rate;
            best.feasible = r.dc.feasible;
          }
        };
        if (q == 0) {
          consider({});
        } else {
          for_each_split(q, lo, hi, consider);
        }
      },
      cap);
  return best;
}

ArcSet raycast_clear_set(const UserPlacement& user, std::span<const UserPlacement> others,
                         const AccessPoint& ap, int samples) {
  if (samples < 2) throw ConfigError("raycast: need at least two samples");
  const Seg c{user.seat.x, user.seat.y};
  const Seg a{ap.position.x, ap.position.y};
  const double d_user = std::hypot(a.x - c.x, a.y - c.y);

  // Blockers that can reach the ray at device height: tall enough, inside
  // the height-scaled radius, and nearer to the AP than the user.
  std::vector<const UserPlacement*> blockers;
  for (const UserPlacement& o : others) {
    if (&o == &user) continue;
    if (o.seat.z < user.device_height) continue;
    const double reach = (o.seat.z - user.device_height) /
                         (ap.position.z - user.device_height) * d_user;
    const double sep = std::hypot(o.seat.x - c.x, o.seat.y - c.y);
    const double to_ap = std::hypot(o.seat.x - a.x, o.seat.y - a.y);
    if (sep <= reach && to_ap < d_user) blockers.push_back(&o);
  }

  auto clear = [&](double psi) {
    const Seg p{c.x + user.body_radius * std::cos(psi), c.y + user.body_radius * std::sin(psi)};
    // p sits on the body circle, where the quadratic's constant term is pure
    // rounding noise. The chord then runs from t = 0 to t = -2 (p - c).d / |d|^2,
    // so the segment enters the body iff it heads inward.
    if ((p.x - c.x) * (a.x - p.x) + (p.y - c.y) * (a.y - p.y) < 0.0) return false;
    for (const UserPlacement* o : blockers) {
      if (inside_overlap(p, a, {o->seat.x, o->seat.y}, o->body_radius) > 0.0) return false;
    }
    return true;
  };

  const double step = kTwoPi / samples;
  std::vector<char> flag(samples);
  for (int i = 0; i < samples; ++i) flag[i] = clear((i + 0.5) * step);

  int first_change = -1;
  for (int i = 0; i < samples; ++i) {
    if (flag[i] != flag[(i + 1) % samples]) {
      first_change = i;
      break;
    }
  }
  if (first_change < 0) return flag[0] ? ArcSet::full() : ArcSet{};

  auto refine = [&](double lo, double hi, bool lo_clear) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (clear(mid) == lo_clear) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  // Transitions in circular order: (edge angle, becomes clear).
  std::vector<std::pair<double, bool>> edges;
  for (int s = 1; s <= samples; ++s) {
    const int i = (first_change + s) % samples;
    const int prev = (i + samples - 1) % samples;
    if (flag[prev] == flag[i]) continue;
    const double lo = (prev + 0.5) * step;
    double hi = (i + 0.5) * step;
    if (hi < lo) hi += kTwoPi;
    edges.emplace_back(refine(lo, hi, flag[prev]), flag[i] != 0);
  }
  if (!edges.front().second) std::rotate(edges.begin(), edges.begin() + 1, edges.end());
  ArcSet result;
  for (std::size_t e = 0; e + 1 < edges.size(); e += 2) {
    double len = edges[e + 1].first - edges[e].first;
    if (len < 0.0) len += kTwoPi;
    result = result.unite(ArcSet::from_arc(wrap_angle(edges[e].first), len));
  }
  return result;
}

SignalExpansion expand_received_signal(int k, const Realization& realization,
                                       const Schedule& schedule, std::span<const double> powers,
                                       const std::vector<CVector>& beams,
                                       const std::vector<CMatrix>& precoders,
                                       std::span<const double> sic_strength, int md_antennas,
                                       BlockedSteering steering) {
  const int aps = schedule.aps(), chains = schedule.chains();
  const int b = schedule.ap_of(k), n = schedule.chain_of(k);
  // Row k of H̃^H: conj(v_k^H H_{kb'} w_{b'n'}) over all (b', n').
  const LinkChannel& serving = realization.link(k, b);
  // Arrival angle: LoS when clear, else the largest rho |alpha|^2 among the
  // scattered paths.
  double aoa = serving.paths.front().aoa;
  if (!serving.los && steering == BlockedSteering::StrongestPath) {
    double best = -1.0;
    for (std::size_t l = 1; l < serving.paths.size(); ++l) {
      const double g = serving.paths[l].avg_path_loss * std::norm(serving.paths[l].gain);
      if (g > best) {
        best = g;
        aoa = serving.paths[l].aoa;
      }
    }
  }
  CVector v(md_antennas);
  const double zeta = kPi * std::cos(aoa);
  for (int m = 0; m < md_antennas; ++m) v(m) = std::polar(1.0 / std::sqrt(md_antennas), m * zeta);
  CRowVector row(aps * chains);
  for (int bp = 0; bp < aps; ++bp) {
    const CMatrix& h = realization.link(k, bp).matrix;
    for (int np = 0; np < chains; ++np) {
      const cplx eff = (v.adjoint() * h * beams[bp * chains + np])(0, 0);
      row(bp * chains + np) = std::conj(eff);
    }
  }
  CMatrix g = CMatrix::Zero(aps * chains, aps * chains);
  for (int bp = 0; bp < aps; ++bp) g.block(bp * chains, bp * chains, chains, chains) = precoders[bp];
  const CRowVector coeff = row * g;

  SignalExpansion out;
  for (int j = 0; j < schedule.users(); ++j) {
    if (!schedule.scheduled(j)) continue;
    const int col = schedule.ap_of(j) * chains + schedule.chain_of(j);
    const double power = std::norm(coeff(col)) * powers[j];
    if (j == k) {
      out.desired = power;
    } else if (schedule.ap_of(j) == b && schedule.chain_of(j) == n) {
      // Weaker in-group users are removed by SIC.
      const bool j_stronger = sic_strength[j] > sic_strength[k] ||
                              (sic_strength[j] == sic_strength[k] && j < k);
      if (j_stronger) out.interference.intra += power;
    } else if (schedule.ap_of(j) == b) {
      out.interference.inter_group += power;
    } else {
      out.interference.inter_ap += power;
    }
  }
  return out;
}

}  // namespace mmnoma
