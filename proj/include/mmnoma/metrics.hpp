#pragma once

#include <array>
#include <span>
#include <vector>

#include "mmnoma/common.hpp"

namespace mmnoma {

/// Binary scheduling tensor c_{kbn} stored as per-user (AP, chain) plus
/// per-group member lists. Groups hold at most two users.
class Schedule {
 public:
  Schedule() = default;
  Schedule(int users, int aps, int chains);

  int users() const { return users_; }
  int aps() const { return aps_; }
  int chains() const { return chains_; }

  /// Throws CapacityError when the group is full or the user already placed.
  void assign(int k, int b, int n);
  void unassign(int k);

  bool scheduled(int k) const { return ap_[k] >= 0; }
  int ap_of(int k) const { return ap_[k]; }
  int chain_of(int k) const { return chain_[k]; }
  bool c(int k, int b, int n) const { return ap_[k] == b && chain_[k] == n; }

  /// Members of group (b, n), ascending user index.
  std::span<const int> members(int b, int n) const;
  int group_size(int b, int n) const { return count_[b * chains_ + n]; }

  std::vector<int> users_of_ap(int b) const;
  std::vector<int> scheduled_users() const;
  int scheduled_count() const;

  bool operator==(const Schedule& other) const;

 private:
  int users_ = 0;
  int aps_ = 0;
  int chains_ = 0;
  std::vector<int> ap_;
  std::vector<int> chain_;
  std::vector<std::array<int, 2>> groups_;
  std::vector<int> count_;
};

/// Global decoding order: users sorted by descending strength, ties by
/// ascending index. rank[k] is k's position (0 = strongest).
struct SicOrder {
  std::vector<int> order;
  std::vector<int> rank;

  bool stronger(int a, int b) const { return rank[a] < rank[b]; }
};

SicOrder sic_order(std::span<const double> strengths);

/// |h̃_{kb'}^H g_{b'n'}|^2 for every user k and every (b', n').
struct GainTable {
  int users = 0;
  int aps = 0;
  int chains = 0;
  Eigen::MatrixXd gain;  // users x (aps * chains)

  GainTable() = default;
  GainTable(int k, int b, int n)
      : users(k), aps(b), chains(n), gain(Eigen::MatrixXd::Zero(k, b * n)) {}
  double at(int k, int b, int n) const { return gain(k, b * chains + n); }
  double& at(int k, int b, int n) { return gain(k, b * chains + n); }
};

/// Intra-group (I), inter-group (II) and inter-AP (III) interference power.
struct InterferenceTerms {
  double intra = 0.0;
  double inter_group = 0.0;
  double inter_ap = 0.0;
  double total() const { return intra + inter_group + inter_ap; }
};

/// Everything the rate expressions need. Powers are per user (index k).
struct RateInputs {
  const Schedule& schedule;
  const GainTable& gains;
  const SicOrder& sic;
  std::span<const double> powers;
  double noise_power;
};

InterferenceTerms interference_terms(int k, const RateInputs& in);

/// R_{k->k}; zero for unscheduled users.
double user_rate(int k, const RateInputs& in);

/// R_{k->i}: rate at which user k decodes the signal of in-group user i.
/// Only defined for two users sharing a group.
double cross_rate(int k, int i, const RateInputs& in);

/// Two-user group with its members ordered by SIC strength.
struct PairRef {
  int ap = 0;
  int chain = 0;
  int strong = 0;
  int weak = 0;
};

std::vector<PairRef> sic_pairs(const Schedule& schedule, const SicOrder& sic);

/// R_{weak->weak} <= R_{strong->weak} + tolerance for every pair.
bool sic_feasible(const RateInputs& in, double tolerance = 0.0);

double sum_rate(const RateInputs& in);

struct PairRate {
  PairRef pair;
  double cross_rate = 0.0;  // R_{strong->weak}
  double weak_rate = 0.0;   // R_{weak->weak}
};

struct RateReport {
  std::vector<double> user_rates;
  std::vector<InterferenceTerms> interference;
  std::vector<PairRate> pairs;
  double sum_rate = 0.0;
  double noise_power = 0.0;
  bool sic_ok = true;
};

RateReport evaluate_rates(const RateInputs& in);

}  // namespace mmnoma
