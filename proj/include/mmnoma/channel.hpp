#pragma once

#include <span>
#include <vector>

#include "mmnoma/common.hpp"
#include "mmnoma/rng.hpp"
#include "mmnoma/venue.hpp"

namespace mmnoma {

/// What stands in for a blocked LoS path when steering beams and combiners
/// and when building the LoS vectors used for AP assignment and pairing.
/// StrongestPath: the NLoS path with the highest gain takes its place.
/// Geometric: the blocked path keeps its geometric angles and contributes a
/// zero LoS vector.
enum class BlockedSteering { StrongestPath, Geometric };

struct ChannelParams {
  double carrier_hz = 60e9;
  int nlos_paths = 2;
  double los_exponent = 2.25;
  double nlos_exponent = 3.71;
  int md_antennas = 15;
  BlockedSteering blocked_steering = BlockedSteering::StrongestPath;
};

/// One propagation path. Index 0 is the LoS path; its angles come from
/// geometry and are kept even when the path is blocked.
struct PathComponent {
  double avg_path_loss = 0.0;
  cplx gain{0.0, 0.0};
  double aod = 0.0;
  double aoa = 0.0;

  double strength() const { return avg_path_loss * std::norm(gain); }
};

struct LinkChannel {
  std::vector<PathComponent> paths;
  bool los = true;
  double distance = 0.0;
  CMatrix matrix;  // md_antennas x ap_antennas

  const PathComponent& los_path() const { return paths.front(); }
  /// Strongest NLoS path strength (0 when there are none).
  double strongest_nlos() const;
  /// Strength used for SIC ordering: LoS when clear, else the best NLoS path.
  double ordering_strength() const { return los ? los_path().strength() : strongest_nlos(); }
  /// Path the link is steered along: the LoS path when clear (or under
  /// Geometric), else the strongest NLoS path when there is one.
  const PathComponent& steering_path(BlockedSteering mode) const;
};

/// Friis-style average path loss (c / (4 pi f))^2 d^-gamma.
double path_loss(double distance, double exponent, double carrier_hz);

/// Phase progression between adjacent half-wavelength ULA elements.
/// Written as sin(pi/2 - angle) so that broadside gives exactly zero.
inline double steering_phase(double angle) { return kPi * std::sin(kPi / 2.0 - angle); }

/// ULA response [1, e^{j zeta}, ..., e^{j (M-1) zeta}].
CVector array_response(double angle, int length);

/// Unit-norm device combiner steered to the given arrival angle.
CVector combiner(double aoa, int md_antennas);

/// Sum of path contributions; the LoS term is dropped when `los` is false.
CMatrix channel_matrix(std::span<const PathComponent> paths, bool los, int md_antennas,
                       int ap_antennas);

/// Draws one AP-device link: LoS gain, then `nlos_paths` scattered paths with
/// uniform angles.
LinkChannel sample_channel(const Position3& device, const Position3& ap, bool los,
                           int ap_antennas, const ChannelParams& params, Rng& rng);

/// One user's share of a split analog beam.
struct SubarrayRequest {
  int user = 0;
  double aod = 0.0;
  int antennas = 0;
};

/// Concatenated sub-array steering blocks ordered by ascending user id. Each
/// block continues the phase of the blocks before it. Entries past the
/// allocated elements are zero.
CVector beam_splitting_beamformer(std::span<const SubarrayRequest> members, int ap_antennas);

/// v^H H w.
cplx effective_channel(const CVector& combiner, const CMatrix& channel, const CVector& beam);

}  // namespace mmnoma
