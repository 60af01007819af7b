#include "mmnoma/baseline.hpp"

#include <algorithm>

namespace mmnoma {

Schedule oma_slot_schedule(const Schedule& noma, const SicOrder& sic, int slot) {
  Schedule s(noma.users(), noma.aps(), noma.chains());
  for (int b = 0; b < noma.aps(); ++b) {
    for (int n = 0; n < noma.chains(); ++n) {
      auto m = noma.members(b, n);
      if (m.size() == 1) {
        s.assign(m[0], b, n);
      } else if (m.size() == 2) {
        const int strong = sic.stronger(m[1], m[0]) ? m[1] : m[0];
        const int weak = strong == m[0] ? m[1] : m[0];
        s.assign(slot == 0 ? strong : weak, b, n);
      }
    }
  }
  return s;
}

OmaResult oma_allocate(const LinkCache& cache, const SystemConfig& system, const Schedule& noma,
                       const DcOptions& options) {
  OmaResult out;
  for (int b = 0; b < noma.aps(); ++b)
    for (int n = 0; n < noma.chains(); ++n) out.slots = std::max(out.slots, noma.group_size(b, n));
  const SicOrder sic = sic_order(sic_strengths(cache, noma));

  std::vector<int> active_slots(noma.users(), 0);
  for (int s = 0; s < out.slots; ++s) {
    out.slot_schedules.push_back(oma_slot_schedule(noma, sic, s));
    for (int k : out.slot_schedules.back().scheduled_users()) ++active_slots[k];
  }

  out.user_rates.assign(noma.users(), 0.0);
  for (int s = 0; s < out.slots; ++s) {
    const Schedule& slot = out.slot_schedules[s];
    const std::vector<int> full(slot.users(), system.ap_antennas);
    const auto beams = build_beams(cache, slot, full);
    const auto eff = effective_channels(cache, slot, beams);
    const ZfPrecoder zf = zf_precoder(eff, slot);
    const GainTable gains = gain_table(eff, slot, &zf.precoders);
    const SicOrder slot_sic = sic_order(sic_strengths(cache, slot));
    // The time-averaged rate must reach R_min, so a user active in a fraction
    // of the slots needs a proportionally higher rate while it transmits.
    std::vector<double> min_rates(slot.users(), 0.0);
    for (int k : slot.scheduled_users())
      min_rates[k] = system.min_rate * out.slots / active_slots[k];
    DcResult dc = dc_power_allocate(slot, gains, slot_sic, system.noise_power,
                                    system.total_power, min_rates, options);
    out.feasible = out.feasible && dc.feasible;
    for (int k = 0; k < slot.users(); ++k) out.user_rates[k] += dc.report.user_rates[k] / out.slots;
    out.slot_results.push_back(std::move(dc));
  }
  for (double r : out.user_rates) out.sum_rate += r;
  return out;
}

}  // namespace mmnoma
