#include "mmnoma/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mmnoma {

Schedule::Schedule(int users, int aps, int chains)
    : users_(users),
      aps_(aps),
      chains_(chains),
      ap_(users, -1),
      chain_(users, -1),
      groups_(static_cast<std::size_t>(aps) * chains, {-1, -1}),
      count_(static_cast<std::size_t>(aps) * chains, 0) {
  if (users < 0 || aps < 1 || chains < 1) throw ConfigError("Schedule: bad dimensions");
}

void Schedule::assign(int k, int b, int n) {
  if (k < 0 || k >= users_ || b < 0 || b >= aps_ || n < 0 || n >= chains_) {
    throw CapacityError("Schedule::assign: index out of range");
  }
  if (ap_[k] >= 0) throw CapacityError("Schedule::assign: user already scheduled");
  const int g = b * chains_ + n;
  if (count_[g] >= 2) throw CapacityError("Schedule::assign: group already holds two users");
  auto& slots = groups_[g];
  if (count_[g] == 0) {
    slots[0] = k;
  } else if (slots[0] < k) {
    slots[1] = k;
  } else {
    slots[1] = slots[0];
    slots[0] = k;
  }
  ++count_[g];
  ap_[k] = b;
  chain_[k] = n;
}

void Schedule::unassign(int k) {
  if (ap_[k] < 0) return;
  const int g = ap_[k] * chains_ + chain_[k];
  auto& slots = groups_[g];
  if (slots[0] == k) slots[0] = slots[1];
  slots[1] = -1;
  --count_[g];
  ap_[k] = -1;
  chain_[k] = -1;
}

std::span<const int> Schedule::members(int b, int n) const {
  const int g = b * chains_ + n;
  return {groups_[g].data(), static_cast<std::size_t>(count_[g])};
}

std::vector<int> Schedule::users_of_ap(int b) const {
  std::vector<int> out;
  for (int k = 0; k < users_; ++k)
    if (ap_[k] == b) out.push_back(k);
  return out;
}

std::vector<int> Schedule::scheduled_users() const {
  std::vector<int> out;
  for (int k = 0; k < users_; ++k)
    if (ap_[k] >= 0) out.push_back(k);
  return out;
}

int Schedule::scheduled_count() const {
  return static_cast<int>(std::count_if(ap_.begin(), ap_.end(), [](int b) { return b >= 0; }));
}

bool Schedule::operator==(const Schedule& o) const {
  return users_ == o.users_ && aps_ == o.aps_ && chains_ == o.chains_ && ap_ == o.ap_ &&
         chain_ == o.chain_;
}

SicOrder sic_order(std::span<const double> strengths) {
  SicOrder s;
  s.order.resize(strengths.size());
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int a, int b) { return strengths[a] > strengths[b]; });
  s.rank.resize(strengths.size());
  for (std::size_t i = 0; i < s.order.size(); ++i) s.rank[s.order[i]] = static_cast<int>(i);
  return s;
}

InterferenceTerms interference_terms(int k, const RateInputs& in) {
  InterferenceTerms t;
  const Schedule& s = in.schedule;
  if (!s.scheduled(k)) return t;
  const int b = s.ap_of(k), n = s.chain_of(k);
  for (int j : s.members(b, n)) {
    if (j != k && in.sic.stronger(j, k)) t.intra += in.powers[j];
  }
  t.intra *= in.gains.at(k, b, n);
  for (int bp = 0; bp < s.aps(); ++bp) {
    for (int np = 0; np < s.chains(); ++np) {
      if (bp == b && np == n) continue;
      double p = 0.0;
      for (int j : s.members(bp, np)) p += in.powers[j];
      if (p == 0.0) continue;
      const double term = in.gains.at(k, bp, np) * p;
      if (bp == b) {
        t.inter_group += term;
      } else {
        t.inter_ap += term;
      }
    }
  }
  return t;
}

double user_rate(int k, const RateInputs& in) {
  if (!in.schedule.scheduled(k)) return 0.0;
  const double signal = in.gains.at(k, in.schedule.ap_of(k), in.schedule.chain_of(k)) *
                        in.powers[k];
  if (signal <= 0.0) return 0.0;
  return std::log2(1.0 + signal / (interference_terms(k, in).total() + in.noise_power));
}

double cross_rate(int k, int i, const RateInputs& in) {
  const Schedule& s = in.schedule;
  if (!s.scheduled(k) || !s.scheduled(i) || s.ap_of(k) != s.ap_of(i) ||
      s.chain_of(k) != s.chain_of(i) || k == i) {
    throw ModelError("cross_rate: users must share a two-user group");
  }
  const int b = s.ap_of(k), n = s.chain_of(k);
  const double a = in.gains.at(k, b, n);
  const double signal = a * in.powers[i];
  if (signal <= 0.0) return 0.0;
  // Signals of users stronger than i stay as interference at k while it decodes i.
  double intra = 0.0;
  for (int j : s.members(b, n)) {
    if (j != i && in.sic.stronger(j, i)) intra += in.powers[j];
  }
  InterferenceTerms t = interference_terms(k, in);
  const double others = t.inter_group + t.inter_ap;
  return std::log2(1.0 + signal / (a * intra + others + in.noise_power));
}

std::vector<PairRef> sic_pairs(const Schedule& schedule, const SicOrder& sic) {
  std::vector<PairRef> out;
  for (int b = 0; b < schedule.aps(); ++b) {
    for (int n = 0; n < schedule.chains(); ++n) {
      auto m = schedule.members(b, n);
      if (m.size() != 2) continue;
      PairRef p{b, n, m[0], m[1]};
      if (sic.stronger(m[1], m[0])) std::swap(p.strong, p.weak);
      out.push_back(p);
    }
  }
  return out;
}

bool sic_feasible(const RateInputs& in, double tolerance) {
  for (const PairRef& p : sic_pairs(in.schedule, in.sic)) {
    if (user_rate(p.weak, in) > cross_rate(p.strong, p.weak, in) + tolerance) return false;
  }
  return true;
}

double sum_rate(const RateInputs& in) {
  double total = 0.0;
  for (int k = 0; k < in.schedule.users(); ++k) total += user_rate(k, in);
  return total;
}

RateReport evaluate_rates(const RateInputs& in) {
  RateReport r;
  r.noise_power = in.noise_power;
  const int users = in.schedule.users();
  r.user_rates.resize(users);
  r.interference.resize(users);
  for (int k = 0; k < users; ++k) {
    r.user_rates[k] = user_rate(k, in);
    r.interference[k] = interference_terms(k, in);
    r.sum_rate += r.user_rates[k];
  }
  for (const PairRef& p : sic_pairs(in.schedule, in.sic)) {
    PairRate pr{p, cross_rate(p.strong, p.weak, in), r.user_rates[p.weak]};
    if (pr.weak_rate > pr.cross_rate) r.sic_ok = false;
    r.pairs.push_back(pr);
  }
  return r;
}

}  // namespace mmnoma
