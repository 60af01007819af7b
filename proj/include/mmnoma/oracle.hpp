#pragma once

#include <functional>
#include <vector>

#include "mmnoma/pipeline.hpp"
#include "mmnoma/venue.hpp"

namespace mmnoma {

inline constexpr double kDefaultEnumerationCap = 1e6;

/// Number of schedules placing every user on some AP, with at most N groups
/// of at most two users per AP. Groups within an AP are unordered.
double count_schedules(int users, int aps, int chains);

/// (K! / (2N)!^B) * ((2N)! / (2^N N!))^B, the fully loaded (K = 2BN) count.
double fully_loaded_count(int aps, int chains);

/// Calls `visit` once per schedule counted by count_schedules. Users join
/// groups in ascending order and groups take chains in creation order.
/// Throws EnumerationLimitError when the count exceeds `cap`.
void enumerate_schedules(int users, int aps, int chains,
                         const std::function<void(const Schedule&)>& visit,
                         double cap = kDefaultEnumerationCap);

struct ScheduleOptimum {
  Schedule schedule;
  double sum_rate = 0.0;
  long long visited = 0;
};

/// Best schedule under the stage-1 rate model; ties keep the first found.
ScheduleOptimum exhaustive_schedule_opt(const UniformPowerModel& model, int chains,
                                        double cap = kDefaultEnumerationCap);

struct AntennaOptimum {
  std::vector<int> split;
  double sum_rate = 0.0;
  long long visited = 0;
};

/// Lexicographic scan of {M_min..M_AP - M_min}^Q under the stage-2 model.
AntennaOptimum exhaustive_antenna_opt(const UniformPowerModel& model, const Schedule& schedule,
                                      double cap = kDefaultEnumerationCap);

struct FullOptimum {
  Schedule schedule;
  std::vector<int> split;
  double sum_rate = 0.0;
  bool feasible = false;
  long long visited = 0;
};

/// Every schedule times every split, each followed by ZF + DC power
/// allocation. Feasible results beat infeasible ones, then the larger sum
/// rate wins.
FullOptimum full_exhaustive(const LinkCache& cache, const PipelineConfig& config,
                            double cap = kDefaultEnumerationCap);

/// Sampled clear set: `samples` azimuths at cell centers, each tested with
/// segment/disk intersections, with clear/blocked transitions refined by
/// bisection.
ArcSet raycast_clear_set(const UserPlacement& user, std::span<const UserPlacement> others,
                         const AccessPoint& ap, int samples);

/// Received-signal decomposition by direct summation over all transmitted
/// symbols, using explicit channel, beam and precoder products.
struct SignalExpansion {
  double desired = 0.0;
  InterferenceTerms interference;
};

SignalExpansion expand_received_signal(int k, const Realization& realization,
                                       const Schedule& schedule, std::span<const double> powers,
                                       const std::vector<CVector>& beams,
                                       const std::vector<CMatrix>& precoders,
                                       std::span<const double> sic_strength, int md_antennas,
                                       BlockedSteering steering = BlockedSteering::StrongestPath);

}  // namespace mmnoma
