#include "mmnoma/channel.hpp"

#include <algorithm>
#include <cmath>

namespace mmnoma {

double LinkChannel::strongest_nlos() const {
  double best = 0.0;
  for (std::size_t l = 1; l < paths.size(); ++l) best = std::max(best, paths[l].strength());
  return best;
}

const PathComponent& LinkChannel::steering_path(BlockedSteering mode) const {
  if (los || mode == BlockedSteering::Geometric || paths.size() < 2) return los_path();
  const PathComponent* best = &paths[1];
  for (std::size_t l = 2; l < paths.size(); ++l)
    if (paths[l].strength() > best->strength()) best = &paths[l];
  return *best;
}

double path_loss(double distance, double exponent, double carrier_hz) {
  if (!(distance > 0.0)) throw ModelError("path_loss: distance must be positive");
  const double scale = kSpeedOfLight / (4.0 * kPi * carrier_hz);
  return scale * scale * std::pow(distance, -exponent);
}

CVector array_response(double angle, int length) {
  if (length < 1) throw ConfigError("array_response: length must be >= 1");
  const double zeta = steering_phase(angle);
  CVector a(length);
  for (int m = 0; m < length; ++m) a(m) = std::polar(1.0, m * zeta);
  return a;
}

CVector combiner(double aoa, int md_antennas) {
  return array_response(aoa, md_antennas) / std::sqrt(static_cast<double>(md_antennas));
}

CMatrix channel_matrix(std::span<const PathComponent> paths, bool los, int md_antennas,
                       int ap_antennas) {
  CMatrix h = CMatrix::Zero(md_antennas, ap_antennas);
  for (std::size_t l = 0; l < paths.size(); ++l) {
    if (l == 0 && !los) continue;
    const PathComponent& p = paths[l];
    const cplx coeff = std::sqrt(p.avg_path_loss) * p.gain;
    h.noalias() += coeff * array_response(p.aoa, md_antennas) *
                   array_response(p.aod, ap_antennas).adjoint();
  }
  return h;
}

LinkChannel sample_channel(const Position3& device, const Position3& ap, bool los,
                           int ap_antennas, const ChannelParams& params, Rng& rng) {
  if (params.nlos_paths < 0) throw ConfigError("nlos_paths must be >= 0");
  LinkChannel link;
  link.los = los;
  const double dx = device.x - ap.x, dy = device.y - ap.y, dz = device.z - ap.z;
  link.distance = std::sqrt(dx * dx + dy * dy + dz * dz);

  PathComponent los_path;
  los_path.avg_path_loss = path_loss(link.distance, params.los_exponent, params.carrier_hz);
  los_path.gain = rng.complex_normal();
  los_path.aod = horizontal_azimuth(ap, device);
  los_path.aoa = horizontal_azimuth(device, ap);
  link.paths.push_back(los_path);

  const double nlos_loss = path_loss(link.distance, params.nlos_exponent, params.carrier_hz);
  for (int l = 0; l < params.nlos_paths; ++l) {
    PathComponent p;
    p.avg_path_loss = nlos_loss;
    p.gain = rng.complex_normal();
    p.aod = kTwoPi * rng.uniform();
    p.aoa = kTwoPi * rng.uniform();
    link.paths.push_back(p);
  }
  link.matrix = channel_matrix(link.paths, los, params.md_antennas, ap_antennas);
  return link;
}

CVector beam_splitting_beamformer(std::span<const SubarrayRequest> members, int ap_antennas) {
  std::vector<SubarrayRequest> ordered(members.begin(), members.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const SubarrayRequest& a, const SubarrayRequest& b) { return a.user < b.user; });
  int total = 0;
  for (const SubarrayRequest& r : ordered) {
    if (r.antennas < 1) throw CapacityError("beamformer: every member needs >= 1 antenna");
    total += r.antennas;
  }
  if (total > ap_antennas) throw CapacityError("beamformer: sub-arrays exceed the AP array");

  const double amplitude = 1.0 / std::sqrt(static_cast<double>(ap_antennas));
  CVector w = CVector::Zero(ap_antennas);
  int offset = 0;
  double carried_phase = 0.0;
  for (const SubarrayRequest& r : ordered) {
    const double zeta = steering_phase(r.aod);
    for (int m = 0; m < r.antennas; ++m) {
      w(offset + m) = std::polar(amplitude, carried_phase + m * zeta);
    }
    offset += r.antennas;
    carried_phase += r.antennas * zeta;
  }
  return w;
}

cplx effective_channel(const CVector& combiner, const CMatrix& channel, const CVector& beam) {
  return combiner.dot(channel * beam);
}

}  // namespace mmnoma
