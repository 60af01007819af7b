#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mmnoma/link_gains.hpp"

namespace mmnoma {

struct GroupingWeights {
  double corr = 0.6;
  double diff = 0.4;
};

/// Users per AP, each list ascending.
struct Partition {
  std::vector<std::vector<int>> aps;

  bool operator==(const Partition&) const = default;
};

/// Assigns users, strongest first, to the AP with the largest LoS gain among
/// those with fewer than 2N users. Ties go to the lowest AP index.
Partition initial_partition(const LinkCache& cache, int chains);

/// |<h_i, h_j>| / (|h_i| |h_j|); 0 when either vector is zero.
double correlation(const CRowVector& hi, const CRowVector& hj);
/// | |h_i|^2 - |h_j|^2 |.
double gain_difference(const CRowVector& hi, const CRowVector& hj);

/// (v - min) / (max - min); a constant input maps to zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

/// Greedy pairing of one AP's users: |users| - N times, pick the ungrouped
/// pair maximizing w1 * Corr + w2 * Diff (both min-max normalized over the
/// remaining candidates). Pairs come back in formation order, each (i, j)
/// with i < j.
std::vector<std::pair<int, int>> select_pairs(const LinkCache& cache, int ap,
                                              std::span<const int> users, int chains,
                                              const GroupingWeights& weights);

/// Groups the users of AP b into `schedule`. Pairs take chains 0, 1, ... in
/// formation order; singletons follow in SIC order.
void group_ap(Schedule& schedule, const LinkCache& cache, int ap, std::span<const int> users,
              const GroupingWeights& weights);

Schedule group_users(const Partition& partition, const LinkCache& cache, int chains,
                     const GroupingWeights& weights);

Partition partition_of(const Schedule& schedule);

/// Moves user k to AP `target_ap`, exchanging it with `target_user`, or
/// filling a hole when target_user < 0.
Partition swap_users(const Partition& partition, int k, int target_ap, int target_user);

struct MwcsIteration {
  int worst_user = -1;
  int candidates = 0;
  double best_candidate = 0.0;
  double sum_rate = 0.0;  // R_sum,1 after the iteration
  bool accepted = false;
};

struct MwcsResult {
  Schedule schedule;
  double sum_rate = 0.0;
  int accepted_iterations = 0;
  std::vector<MwcsIteration> trace;
};

/// Worst-connection swapping starting from the initial partition.
MwcsResult mwcs(const UniformPowerModel& model, int chains, const GroupingWeights& weights);

/// Same search started from an arbitrary partition.
MwcsResult mwcs_from(const UniformPowerModel& model, const Partition& start, int chains,
                     const GroupingWeights& weights);

}  // namespace mmnoma
