#pragma once

#include <span>
#include <vector>

#include "mmnoma/link_gains.hpp"
#include "mmnoma/rng.hpp"

namespace mmnoma {

struct SaConfig {
  double t0 = 10.0;
  double beta = 0.95;
  int tmax = 12;
  double eps1 = 7e-11;
};

void validate(const SaConfig& config);

/// Number of temperature levels visited by the annealing loop.
int cooling_steps(const SaConfig& config);

/// Resamples q' positions of m (q' uniform on 1..Q-1, or 1 when Q = 1),
/// each from {lo, ..., hi}.
std::vector<int> neighbor(std::span<const int> m, int lo, int hi, Rng& rng);

struct SaStep {
  double temperature = 0.0;
  double current = 0.0;  // R_sum,2 at the end of the temperature level
  double best = 0.0;
};

struct SaResult {
  std::vector<int> split;
  double sum_rate = 0.0;
  int evaluations = 0;
  std::vector<SaStep> trace;
};

/// Simulated annealing over split vectors for the pairs of `schedule`
/// (ordering as in pair_groups), starting from an even split.
SaResult sa_allocate(const UniformPowerModel& model, const Schedule& schedule,
                     const SaConfig& config, Rng& rng);

}  // namespace mmnoma
