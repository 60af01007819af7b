#include "mmnoma/pipeline.hpp"

namespace mmnoma {

NomaResult run_noma(const LinkCache& cache, const PipelineConfig& config, Rng& sa_rng) {
  const UniformPowerModel model(cache, config.system);
  NomaResult out;
  out.stage1 = mwcs(model, config.system.rf_chains, config.weights);
  out.stage2 = sa_allocate(model, out.stage1.schedule, config.sa, sa_rng);
  out.antennas =
      antennas_from_split(out.stage1.schedule, out.stage2.split, config.system.ap_antennas);
  out.stage3 = run_stage3(cache, config.system, out.stage1.schedule, out.antennas, config.dc);
  out.sum_rate = out.stage3.dc.report.sum_rate;
  out.feasible = out.stage3.dc.feasible;
  return out;
}

}  // namespace mmnoma
