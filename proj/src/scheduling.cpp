#include "mmnoma/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mmnoma {

Partition initial_partition(const LinkCache& cache, int chains) {
  const int users = cache.users(), aps = cache.aps();
  const int capacity = 2 * chains;
  if (users > capacity * aps) throw CapacityError("more users than 2 * B * N group slots");

  std::vector<double> best(users, 0.0);
  for (int k = 0; k < users; ++k)
    for (int b = 0; b < aps; ++b) best[k] = std::max(best[k], cache.los_gain(k, b));
  std::vector<int> order(users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return best[a] > best[b]; });

  Partition p;
  p.aps.resize(aps);
  for (int k : order) {
    int chosen = -1;
    for (int b = 0; b < aps; ++b) {
      if (static_cast<int>(p.aps[b].size()) >= capacity) continue;
      if (chosen < 0 || cache.los_gain(k, b) > cache.los_gain(k, chosen)) chosen = b;
    }
    p.aps[chosen].push_back(k);
  }
  for (auto& list : p.aps) std::sort(list.begin(), list.end());
  return p;
}

double correlation(const CRowVector& hi, const CRowVector& hj) {
  const double ni = hi.norm(), nj = hj.norm();
  if (ni == 0.0 || nj == 0.0) return 0.0;
  return std::min(1.0, std::abs(hi.dot(hj)) / (ni * nj));
}

double gain_difference(const CRowVector& hi, const CRowVector& hj) {
  return std::abs(hi.squaredNorm() - hj.squaredNorm());
}

std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

std::vector<std::pair<int, int>> select_pairs(const LinkCache& cache, int ap,
                                              std::span<const int> users, int chains,
                                              const GroupingWeights& weights) {
  const int count = static_cast<int>(users.size());
  if (count > 2 * chains) throw CapacityError("AP holds more than 2N users");
  std::vector<std::pair<int, int>> pairs;
  if (count <= chains) return pairs;

  std::vector<int> open(users.begin(), users.end());
  std::sort(open.begin(), open.end());
  std::vector<std::pair<int, int>> cand;
  std::vector<double> corr, diff;
  for (int round = 0; round < count - chains; ++round) {
    cand.clear();
    corr.clear();
    diff.clear();
    for (std::size_t a = 0; a < open.size(); ++a) {
      for (std::size_t b = a + 1; b < open.size(); ++b) {
        const CRowVector& hi = cache.los_vector(open[a], ap);
        const CRowVector& hj = cache.los_vector(open[b], ap);
        cand.emplace_back(open[a], open[b]);
        corr.push_back(correlation(hi, hj));
        diff.push_back(gain_difference(hi, hj));
      }
    }
    const auto nc = min_max_normalize(corr);
    const auto nd = min_max_normalize(diff);
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      const double score = weights.corr * nc[c] + weights.diff * nd[c];
      // Candidates are generated in lexicographic order, so strict > keeps the
      // smallest (i, j) among ties.
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    pairs.push_back(cand[best]);
    std::erase(open, cand[best].first);
    std::erase(open, cand[best].second);
  }
  return pairs;
}

void group_ap(Schedule& schedule, const LinkCache& cache, int ap, std::span<const int> users,
              const GroupingWeights& weights) {
  const auto pairs = select_pairs(cache, ap, users, schedule.chains(), weights);
  int chain = 0;
  std::vector<int> single(users.begin(), users.end());
  for (const auto& [i, j] : pairs) {
    schedule.assign(i, ap, chain);
    schedule.assign(j, ap, chain);
    ++chain;
    std::erase(single, i);
    std::erase(single, j);
  }
  std::stable_sort(single.begin(), single.end(), [&](int a, int b) {
    const double sa = cache.sic_strength(a, ap), sb = cache.sic_strength(b, ap);
    return sa > sb || (sa == sb && a < b);
  });
  for (int k : single) schedule.assign(k, ap, chain++);
}

Schedule group_users(const Partition& partition, const LinkCache& cache, int chains,
                     const GroupingWeights& weights) {
  Schedule s(cache.users(), static_cast<int>(partition.aps.size()), chains);
  for (int b = 0; b < static_cast<int>(partition.aps.size()); ++b)
    group_ap(s, cache, b, partition.aps[b], weights);
  return s;
}

Partition partition_of(const Schedule& schedule) {
  Partition p;
  p.aps.resize(schedule.aps());
  for (int k = 0; k < schedule.users(); ++k)
    if (schedule.scheduled(k)) p.aps[schedule.ap_of(k)].push_back(k);
  return p;
}

Partition swap_users(const Partition& partition, int k, int target_ap, int target_user) {
  Partition p = partition;
  int source = -1;
  for (int b = 0; b < static_cast<int>(p.aps.size()); ++b)
    if (std::find(p.aps[b].begin(), p.aps[b].end(), k) != p.aps[b].end()) source = b;
  if (source < 0 || source == target_ap) throw ModelError("swap: user must move to another AP");
  auto& from = p.aps[source];
  auto& to = p.aps[target_ap];
  std::erase(from, k);
  if (target_user >= 0) {
    if (std::find(to.begin(), to.end(), target_user) == to.end()) {
      throw ModelError("swap: target user is not on the target AP");
    }
    std::erase(to, target_user);
    from.push_back(target_user);
    std::sort(from.begin(), from.end());
  }
  to.push_back(k);
  std::sort(to.begin(), to.end());
  return p;
}

namespace {

Schedule regroup(const Schedule& current, const LinkCache& cache, const Partition& p, int ap_a,
                 int ap_b, const GroupingWeights& weights) {
  Schedule s = current;
  for (int k = 0; k < s.users(); ++k)
    if (s.ap_of(k) == ap_a || s.ap_of(k) == ap_b) s.unassign(k);
  group_ap(s, cache, ap_a, p.aps[ap_a], weights);
  group_ap(s, cache, ap_b, p.aps[ap_b], weights);
  return s;
}

}  // namespace

MwcsResult mwcs(const UniformPowerModel& model, int chains, const GroupingWeights& weights) {
  return mwcs_from(model, initial_partition(model.cache(), chains), chains, weights);
}

MwcsResult mwcs_from(const UniformPowerModel& model, const Partition& start, int chains,
                     const GroupingWeights& weights) {
  const LinkCache& cache = model.cache();
  const int capacity = 2 * chains;
  MwcsResult res;
  res.schedule = group_users(start, cache, chains, weights);
  Partition partition = start;
  RateReport report = model.evaluate(res.schedule, model.equal_split(res.schedule));
  res.sum_rate = report.sum_rate;

  std::vector<int> active = res.schedule.scheduled_users();
  while (!active.empty()) {
    MwcsIteration it;
    int worst = active.front();
    for (int k : active)
      if (report.user_rates[k] < report.user_rates[worst]) worst = k;
    it.worst_user = worst;
    const int home = res.schedule.ap_of(worst);

    bool have_best = false;
    double best_rate = 0.0;
    Schedule best_schedule;
    RateReport best_report;
    for (int b = 0; b < static_cast<int>(partition.aps.size()); ++b) {
      if (b == home) continue;
      std::vector<int> targets = partition.aps[b];
      if (static_cast<int>(targets.size()) < capacity) targets.push_back(-1);
      for (int target : targets) {
        const Partition cand = swap_users(partition, worst, b, target);
        Schedule s = regroup(res.schedule, cache, cand, home, b, weights);
        RateReport r = model.evaluate(s, model.equal_split(s));
        ++it.candidates;
        if (!have_best || r.sum_rate > best_rate) {
          have_best = true;
          best_rate = r.sum_rate;
          best_schedule = std::move(s);
          best_report = std::move(r);
        }
      }
    }
    it.best_candidate = best_rate;
    if (have_best && res.sum_rate < best_rate) {
      res.schedule = std::move(best_schedule);
      report = std::move(best_report);
      res.sum_rate = best_rate;
      partition = partition_of(res.schedule);
      active = res.schedule.scheduled_users();
      it.accepted = true;
      ++res.accepted_iterations;
    } else {
      std::erase(active, worst);
    }
    it.sum_rate = res.sum_rate;
    res.trace.push_back(it);
  }
  return res;
}

}  // namespace mmnoma
