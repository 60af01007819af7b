#pragma once

#include <vector>

#include "mmnoma/antenna.hpp"
#include "mmnoma/baseline.hpp"
#include "mmnoma/power.hpp"
#include "mmnoma/scheduling.hpp"

namespace mmnoma {

struct PipelineConfig {
  SystemConfig system;
  GroupingWeights weights;
  SaConfig sa;
  DcOptions dc;
};

struct NomaResult {
  MwcsResult stage1;
  SaResult stage2;
  std::vector<int> antennas;
  Stage3Result stage3;
  double sum_rate = 0.0;
  bool feasible = true;
};

/// Scheduling, then antenna allocation, then ZF + DC power allocation.
NomaResult run_noma(const LinkCache& cache, const PipelineConfig& config, Rng& sa_rng);

}  // namespace mmnoma
