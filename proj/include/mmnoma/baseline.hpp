#pragma once

#include <vector>

#include "mmnoma/power.hpp"

namespace mmnoma {

/// TDMA comparator. Paired users of a NOMA group take turns in equal time
/// slots (strong member first); singletons transmit in every slot. Each
/// active user gets the full array, and power is re-allocated per slot.
struct OmaResult {
  int slots = 1;
  std::vector<Schedule> slot_schedules;
  std::vector<DcResult> slot_results;
  std::vector<double> user_rates;  // averaged over slots
  double sum_rate = 0.0;
  bool feasible = true;
};

/// Users active in slot s: the SIC-rank-s member of every pair, plus all
/// singletons.
Schedule oma_slot_schedule(const Schedule& noma, const SicOrder& sic, int slot);

OmaResult oma_allocate(const LinkCache& cache, const SystemConfig& system, const Schedule& noma,
                       const DcOptions& options = {});

}  // namespace mmnoma
