#pragma once

#include <span>
#include <vector>

#include "mmnoma/metrics.hpp"
#include "mmnoma/realization.hpp"

namespace mmnoma {

/// System-wide parameters shared by all three stages.
struct SystemConfig {
  int ap_antennas = 120;
  int rf_chains = 1;
  int min_antennas = 0;        // 0 selects ap_antennas / 6
  double noise_power = 1e-11;  // watts
  double total_power = 1.0;    // watts, shared by all APs
  double min_rate = 0.25;      // bits/s/Hz

  int resolved_min_antennas() const { return min_antennas > 0 ? min_antennas : ap_antennas / 6; }
};

/// Per-realization quantities that do not depend on the allocation.
///
/// row(k, s, b) is v_k^H H_{kb} with v_k steered to the arrival angle of
/// the serving AP's steering path (see BlockedSteering). Any effective channel is then a single inner product
/// with a beam.
class LinkCache {
 public:
  LinkCache(const Realization& realization, int ap_antennas, int md_antennas,
            BlockedSteering steering = BlockedSteering::StrongestPath);

  int users() const { return users_; }
  int aps() const { return aps_; }
  int ap_antennas() const { return ap_antennas_; }

  const CRowVector& row(int k, int serving, int b) const {
    return rows_[(static_cast<std::size_t>(k) * aps_ + serving) * aps_ + b];
  }
  /// LoS-only channel through the matched combiner, zero when blocked.
  const CRowVector& los_vector(int k, int b) const { return los_[k * aps_ + b]; }
  double los_gain(int k, int b) const { return los_gain_[k * aps_ + b]; }
  /// Geometric LoS departure angle at AP b.
  double aod(int k, int b) const { return aod_[k * aps_ + b]; }
  /// LoS strength when clear, else the strongest scattered path.
  double sic_strength(int k, int b) const { return strength_[k * aps_ + b]; }

 private:
  int users_ = 0;
  int aps_ = 0;
  int ap_antennas_ = 0;
  std::vector<CRowVector> rows_;
  std::vector<CRowVector> los_;
  std::vector<double> los_gain_;
  std::vector<double> aod_;
  std::vector<double> strength_;
};

/// Two-user groups in ascending (AP, chain) order; index q of a split vector.
std::vector<std::pair<int, int>> pair_groups(const Schedule& schedule);

/// Per-user antenna counts from a split vector. m_q goes to the member with
/// the smaller index, its partner gets the rest; singletons get the full array.
std::vector<int> antennas_from_split(const Schedule& schedule, std::span<const int> split,
                                     int ap_antennas);

/// Analog beams w_{bn}, index b * chains + n. Empty groups get a zero beam.
std::vector<CVector> build_beams(const LinkCache& cache, const Schedule& schedule,
                                 std::span<const int> antennas);

/// h̃_{kb} (length N) for every scheduled user k and every AP b.
struct EffectiveChannels {
  int users = 0;
  int aps = 0;
  int chains = 0;
  std::vector<CVector> h;  // k * aps + b

  const CVector& at(int k, int b) const { return h[k * aps + b]; }
};

EffectiveChannels effective_channels(const LinkCache& cache, const Schedule& schedule,
                                     const std::vector<CVector>& beams);

/// Gains |h̃^H g|^2. `precoders` holds one N x N matrix per AP; nullptr means
/// the identity.
GainTable gain_table(const EffectiveChannels& eff, const Schedule& schedule,
                     const std::vector<CMatrix>* precoders);

/// SIC strengths of scheduled users against their serving AP (0 otherwise).
std::vector<double> sic_strengths(const LinkCache& cache, const Schedule& schedule);

/// Rate model of stages 1 and 2: p_total / K per scheduled user and an
/// identity digital precoder.
class UniformPowerModel {
 public:
  UniformPowerModel(const LinkCache& cache, const SystemConfig& system);

  /// Pairs split the array in half, singletons use all of it.
  std::vector<int> equal_split(const Schedule& schedule) const;

  RateReport evaluate(const Schedule& schedule, std::span<const int> antennas) const;
  double sum_rate(const Schedule& schedule, std::span<const int> antennas) const;
  double sum_rate(const Schedule& schedule) const {
    return sum_rate(schedule, equal_split(schedule));
  }

  const LinkCache& cache() const { return cache_; }
  const SystemConfig& system() const { return system_; }

 private:
  const LinkCache& cache_;
  SystemConfig system_;
};

}  // namespace mmnoma
