#include "mmnoma/realization.hpp"

#include <numeric>

namespace mmnoma {

std::vector<std::size_t> sample_seats(std::size_t seat_count, std::size_t users, Rng& rng) {
  if (users > seat_count) throw CapacityError("more users requested than seats available");
  std::vector<std::size_t> pool(seat_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < users; ++i) {
    const std::size_t j = i + rng.uniform_index(seat_count - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(users);
  return pool;
}

Realization realize(const VenueScenario& scenario, const ClearSetTable& table,
                    std::span<const std::size_t> seats, std::size_t aps,
                    const RealizationOptions& options, std::uint64_t seed) {
  if (aps == 0 || aps > scenario.aps.size() || aps > table.ap_count()) {
    throw ConfigError("realize: AP count out of range");
  }
  Realization r;
  r.users = seats.size();
  r.aps = aps;
  r.seats.assign(seats.begin(), seats.end());

  Rng orientation_rng(derive_seed(seed, {1}));
  r.blockage.reserve(r.users * aps);
  for (std::size_t k = 0; k < r.users; ++k) {
    const UserPlacement& user = scenario.seats.at(seats[k]);
    const double psi = sample_orientation(user, scenario.orientation, orientation_rng);
    r.devices.push_back(device_position(user, psi));
    for (std::size_t b = 0; b < aps; ++b) {
      BlockageOutcome out;
      out.clear_set = table.at(seats[k], b);
      out.sampled_orientation = psi;
      out.los = options.blockage ? out.clear_set.contains(psi) : true;
      r.blockage.push_back(std::move(out));
    }
  }

  r.links.reserve(r.users * aps);
  for (std::size_t k = 0; k < r.users; ++k) {
    for (std::size_t b = 0; b < aps; ++b) {
      Rng link_rng(derive_seed(seed, {2, k, b}));
      r.links.push_back(sample_channel(r.devices[k], scenario.aps[b].position,
                                       r.blockage[k * aps + b].los, options.ap_antennas,
                                       options.channel, link_rng));
    }
  }
  return r;
}

}  // namespace mmnoma
