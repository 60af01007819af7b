#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mmnoma/arc_set.hpp"
#include "mmnoma/rng.hpp"

namespace mmnoma {

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double horizontal_distance(const Position3& a, const Position3& b);

/// Azimuth of b as seen from a, in [0, 2*pi).
double horizontal_azimuth(const Position3& from, const Position3& to);

/// A seated person. seat.z is the head height (seated height + platform);
/// device_height is the handset height, platform included.
struct UserPlacement {
  Position3 seat;
  double body_radius = 0.27;
  double device_height = 0.70;
  double orientation_center = 0.0;
  double platform_height = 0.0;
};

struct AccessPoint {
  Position3 position;
  int antenna_count = 120;
  int rf_chain_count = 1;
};

enum class OrientationKind { TriangularAroundCenter, UniformCircle, Fixed };

struct OrientationModel {
  OrientationKind kind = OrientationKind::TriangularAroundCenter;
  double half_width = kDefaultHalfWidth;

  static constexpr double kDefaultHalfWidth = 1.0471975511965976;  // pi / 3
};

/// Physical constants of the seated population.
struct BodyModel {
  double person_height = 1.25;  // seated head height above the platform
  double device_height = 0.70;  // handset height above the platform
  double body_radius = 0.27;
};

struct VenueScenario {
  std::vector<UserPlacement> seats;
  std::vector<AccessPoint> aps;
  OrientationModel orientation;
  BodyModel body;
};

struct GridSpec {
  int rows = 1;
  int cols = 1;
  double row_pitch = 0.9;
  double col_pitch = 0.6;
  double rake_per_row = 0.0;
  double first_row_distance = 2.0;  // stage center (origin) to first row
};

/// Rectangular seating chart facing a stage centered at the origin.
/// Row r sits at y = first_row_distance + r * row_pitch, columns are centered
/// on x = 0, and each row is raised by rake_per_row over the previous one.
VenueScenario generate_grid_venue(const GridSpec& grid, std::span<const Position3> ap_positions,
                                  const BodyModel& body = {}, int ap_antennas = 120,
                                  int rf_chains = 1);

/// Builds a seat from a floor position and platform height.
UserPlacement make_seat(double x, double y, double platform, const BodyModel& body);

/// Throws ConfigError on an unusable scenario; returns non-fatal warnings
/// (overlapping body disks).
std::vector<std::string> validate_scenario(const VenueScenario& scenario);

/// Arc of device azimuths (device on the body circle) whose horizontal
/// segment to the AP does not cross the wearer's own body disk.
ArcSet self_body_clear_arcs(const UserPlacement& user, const AccessPoint& ap);

/// Radius around the subject inside which a blocker of the given height
/// shadows the LoS ray at the device plane.
double effective_shadow_distance(double blocker_height, double device_height, double ap_height,
                                 double horizontal_distance_user_ap);

/// Device azimuths not shadowed by other seated people.
ArcSet nearby_user_clear_arcs(const UserPlacement& user, std::span<const UserPlacement> others,
                              const AccessPoint& ap);

/// Same, with `others` given as seat indices into `seats` (the subject index
/// is skipped).
ArcSet nearby_user_clear_arcs(std::size_t subject, std::span<const UserPlacement> seats,
                              std::span<const std::size_t> others, const AccessPoint& ap);

/// Self-body clear arcs intersected with the nearby-user clear arcs.
ArcSet clear_set(const UserPlacement& user, const AccessPoint& ap,
                 std::span<const UserPlacement> others);

double sample_orientation(const UserPlacement& user, const OrientationModel& model, Rng& rng);

struct BlockageOutcome {
  ArcSet clear_set;
  double sampled_orientation = 0.0;
  bool los = false;
};

/// Per-seat, per-AP clear sets. Depends only on the static geometry.
class ClearSetTable {
 public:
  ClearSetTable() = default;
  /// Blockers are all other seats (fully occupied venue).
  explicit ClearSetTable(const VenueScenario& scenario);

  const ArcSet& at(std::size_t seat, std::size_t ap) const { return sets_[seat * aps_ + ap]; }
  std::size_t seat_count() const { return seats_; }
  std::size_t ap_count() const { return aps_; }

 private:
  std::size_t seats_ = 0;
  std::size_t aps_ = 0;
  std::vector<ArcSet> sets_;
};

/// Samples one orientation per selected user (shared by all APs) and sets
/// the LoS indicator against every AP. Result is row-major users x APs.
std::vector<BlockageOutcome> realize_blockage(const VenueScenario& scenario,
                                              const ClearSetTable& table,
                                              std::span<const std::size_t> selected_seats,
                                              Rng& rng);

/// Device position on the body circle at the given azimuth.
Position3 device_position(const UserPlacement& user, double orientation);

}  // namespace mmnoma
