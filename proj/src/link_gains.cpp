#include "mmnoma/link_gains.hpp"

#include <cmath>

namespace mmnoma {

LinkCache::LinkCache(const Realization& r, int ap_antennas, int md_antennas,
                     BlockedSteering steering)
    : users_(static_cast<int>(r.users)),
      aps_(static_cast<int>(r.aps)),
      ap_antennas_(ap_antennas) {
  const std::size_t links = static_cast<std::size_t>(users_) * aps_;
  los_.resize(links);
  los_gain_.resize(links);
  aod_.resize(links);
  strength_.resize(links);
  rows_.resize(links * aps_);
  for (int k = 0; k < users_; ++k) {
    for (int s = 0; s < aps_; ++s) {
      const LinkChannel& serving = r.link(k, s);
      if (serving.matrix.cols() != ap_antennas || serving.matrix.rows() != md_antennas) {
        throw ConfigError("LinkCache: channel dimensions do not match the system");
      }
      const PathComponent& p = serving.steering_path(steering);
      const CVector v = combiner(p.aoa, md_antennas);
      for (int b = 0; b < aps_; ++b) {
        rows_[(static_cast<std::size_t>(k) * aps_ + s) * aps_ + b] =
            v.adjoint() * r.link(k, b).matrix;
      }
      const std::size_t i = static_cast<std::size_t>(k) * aps_ + s;
      aod_[i] = p.aod;
      strength_[i] = serving.ordering_strength();
      if (serving.los || &p != &serving.los_path()) {
        const cplx coeff = std::sqrt(p.avg_path_loss * md_antennas) * p.gain;
        los_[i] = coeff * array_response(p.aod, ap_antennas).adjoint();
      } else {
        los_[i] = CRowVector::Zero(ap_antennas);
      }
      los_gain_[i] = los_[i].squaredNorm();
    }
  }
}

std::vector<std::pair<int, int>> pair_groups(const Schedule& schedule) {
  std::vector<std::pair<int, int>> out;
  for (int b = 0; b < schedule.aps(); ++b)
    for (int n = 0; n < schedule.chains(); ++n)
      if (schedule.group_size(b, n) == 2) out.emplace_back(b, n);
  return out;
}

std::vector<int> antennas_from_split(const Schedule& schedule, std::span<const int> split,
                                     int ap_antennas) {
  const auto pairs = pair_groups(schedule);
  if (split.size() != pairs.size()) throw ConfigError("split vector length does not match pairs");
  std::vector<int> antennas(schedule.users(), 0);
  for (int k = 0; k < schedule.users(); ++k)
    if (schedule.scheduled(k)) antennas[k] = ap_antennas;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    auto m = schedule.members(pairs[q].first, pairs[q].second);
    antennas[m[0]] = split[q];
    antennas[m[1]] = ap_antennas - split[q];
  }
  return antennas;
}

std::vector<CVector> build_beams(const LinkCache& cache, const Schedule& schedule,
                                 std::span<const int> antennas) {
  const int n_chains = schedule.chains();
  std::vector<CVector> beams(static_cast<std::size_t>(schedule.aps()) * n_chains);
  std::vector<SubarrayRequest> req;
  for (int b = 0; b < schedule.aps(); ++b) {
    for (int n = 0; n < n_chains; ++n) {
      auto m = schedule.members(b, n);
      CVector& w = beams[b * n_chains + n];
      if (m.empty()) {
        w = CVector::Zero(cache.ap_antennas());
        continue;
      }
      req.clear();
      for (int k : m) {
        const int count = m.size() == 1 ? cache.ap_antennas() : antennas[k];
        req.push_back({k, cache.aod(k, b), count});
      }
      w = beam_splitting_beamformer(req, cache.ap_antennas());
    }
  }
  return beams;
}

EffectiveChannels effective_channels(const LinkCache& cache, const Schedule& schedule,
                                     const std::vector<CVector>& beams) {
  EffectiveChannels e{schedule.users(), schedule.aps(), schedule.chains(), {}};
  e.h.resize(static_cast<std::size_t>(e.users) * e.aps);
  for (int k = 0; k < e.users; ++k) {
    if (!schedule.scheduled(k)) continue;
    const int s = schedule.ap_of(k);
    for (int b = 0; b < e.aps; ++b) {
      CVector& h = e.h[k * e.aps + b];
      h.resize(e.chains);
      const CRowVector& row = cache.row(k, s, b);
      for (int n = 0; n < e.chains; ++n) h(n) = (row * beams[b * e.chains + n])(0);
    }
  }
  return e;
}

GainTable gain_table(const EffectiveChannels& eff, const Schedule& schedule,
                     const std::vector<CMatrix>* precoders) {
  GainTable g(eff.users, eff.aps, eff.chains);
  for (int k = 0; k < eff.users; ++k) {
    if (!schedule.scheduled(k)) continue;
    for (int b = 0; b < eff.aps; ++b) {
      const CVector& h = eff.at(k, b);
      for (int n = 0; n < eff.chains; ++n) {
        g.at(k, b, n) = precoders ? std::norm(h.dot((*precoders)[b].col(n))) : std::norm(h(n));
      }
    }
  }
  return g;
}

std::vector<double> sic_strengths(const LinkCache& cache, const Schedule& schedule) {
  std::vector<double> s(schedule.users(), 0.0);
  for (int k = 0; k < schedule.users(); ++k)
    if (schedule.scheduled(k)) s[k] = cache.sic_strength(k, schedule.ap_of(k));
  return s;
}

UniformPowerModel::UniformPowerModel(const LinkCache& cache, const SystemConfig& system)
    : cache_(cache), system_(system) {}

std::vector<int> UniformPowerModel::equal_split(const Schedule& schedule) const {
  std::vector<int> antennas(schedule.users(), 0);
  for (int k = 0; k < schedule.users(); ++k) {
    if (!schedule.scheduled(k)) continue;
    const bool paired = schedule.group_size(schedule.ap_of(k), schedule.chain_of(k)) == 2;
    antennas[k] = paired ? system_.ap_antennas / 2 : system_.ap_antennas;
  }
  return antennas;
}

RateReport UniformPowerModel::evaluate(const Schedule& schedule,
                                       std::span<const int> antennas) const {
  const auto beams = build_beams(cache_, schedule, antennas);
  const auto eff = effective_channels(cache_, schedule, beams);
  const GainTable gains = gain_table(eff, schedule, nullptr);
  const SicOrder sic = sic_order(sic_strengths(cache_, schedule));
  std::vector<double> powers(schedule.users(), 0.0);
  const double p = system_.total_power / cache_.users();
  for (int k = 0; k < schedule.users(); ++k)
    if (schedule.scheduled(k)) powers[k] = p;
  return evaluate_rates(RateInputs{schedule, gains, sic, powers, system_.noise_power});
}

double UniformPowerModel::sum_rate(const Schedule& schedule, std::span<const int> antennas) const {
  return evaluate(schedule, antennas).sum_rate;
}

}  // namespace mmnoma
