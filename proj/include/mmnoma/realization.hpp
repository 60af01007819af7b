#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmnoma/channel.hpp"
#include "mmnoma/venue.hpp"

namespace mmnoma {

/// One Monte Carlo draw: selected seats, orientations, LoS indicators and
/// per-(user, AP) channels. Indexing is row-major users x APs.
struct Realization {
  std::size_t users = 0;
  std::size_t aps = 0;
  std::vector<std::size_t> seats;
  std::vector<BlockageOutcome> blockage;
  std::vector<Position3> devices;
  std::vector<LinkChannel> links;

  const LinkChannel& link(std::size_t k, std::size_t b) const { return links[k * aps + b]; }
  bool los(std::size_t k, std::size_t b) const { return links[k * aps + b].los; }
};

/// K distinct seat indices drawn uniformly without replacement.
std::vector<std::size_t> sample_seats(std::size_t seat_count, std::size_t users, Rng& rng);

struct RealizationOptions {
  int ap_antennas = 120;
  ChannelParams channel;
  bool blockage = true;  // false: every link keeps its LoS path
};

/// Draws orientations (stream tag 1) and per-link channels (stream tag 2,
/// user, AP) from `seed`. APs used are the first `aps` entries of the
/// scenario.
Realization realize(const VenueScenario& scenario, const ClearSetTable& table,
                    std::span<const std::size_t> seats, std::size_t aps,
                    const RealizationOptions& options, std::uint64_t seed);

}  // namespace mmnoma
