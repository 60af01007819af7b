#include "mmnoma/venue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmnoma/common.hpp"

namespace mmnoma {

namespace {

struct Vec2 {
  double x;
  double y;
};

Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
Vec2 flat(const Position3& p) { return {p.x, p.y}; }
double azimuth(Vec2 v) { return wrap_angle(std::atan2(v.y, v.x)); }

// True when the segment p-a passes through the open disk (q, r).
bool segment_enters_disk(Vec2 p, Vec2 a, Vec2 q, double r) {
  const Vec2 d = a - p;
  const Vec2 f = p - q;
  const double dd = dot(d, d);
  double t = dd > 0.0 ? -dot(f, d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 c = f + t * d;
  return dot(c, c) < r * r;
}

// Angles on the subject circle where the shadow of one blocker can begin or
// end: intersections with the two tangent lines from the AP, and with the
// blocker's own circle.
std::vector<double> shadow_events(Vec2 center, double radius, Vec2 blocker, double blocker_radius,
                                  Vec2 ap) {
  std::vector<double> events;
  const Vec2 to_blocker = blocker - ap;
  const double dist = norm(to_blocker);
  const double beta = std::atan2(to_blocker.y, to_blocker.x);
  const double delta = std::asin(blocker_radius / dist);
  for (double dir : {beta - delta, beta + delta}) {
    const Vec2 u{std::cos(dir), std::sin(dir)};
    const Vec2 f = ap - center;
    const double b = dot(u, f);
    const double c = dot(f, f) - radius * radius;
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    for (double t : {-b - root, -b + root}) {
      events.push_back(azimuth(ap + t * u - center));
    }
  }
  const Vec2 between = blocker - center;
  const double sep = norm(between);
  if (sep > 0.0 && sep < radius + blocker_radius &&
      sep > std::abs(radius - blocker_radius)) {
    const double gamma = std::atan2(between.y, between.x);
    const double cos_half =
        (sep * sep + radius * radius - blocker_radius * blocker_radius) / (2.0 * sep * radius);
    const double half = std::acos(std::clamp(cos_half, -1.0, 1.0));
    events.push_back(wrap_angle(gamma - half));
    events.push_back(wrap_angle(gamma + half));
  }
  return events;
}

ArcSet shadow_on_circle(Vec2 center, double radius, Vec2 blocker, double blocker_radius,
                        Vec2 ap) {
  std::vector<double> events = shadow_events(center, radius, blocker, blocker_radius, ap);
  auto blocked_at = [&](double psi) {
    const Vec2 p = center + radius * Vec2{std::cos(psi), std::sin(psi)};
    return segment_enters_disk(p, ap, blocker, blocker_radius);
  };
  if (events.empty()) return blocked_at(0.0) ? ArcSet::full() : ArcSet{};
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  ArcSet blocked;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double lo = events[i];
    const double hi = (i + 1 < events.size()) ? events[i + 1] : events.front() + kTwoPi;
    if (!(hi > lo)) continue;
    if (blocked_at(0.5 * (lo + hi))) blocked = blocked.unite(ArcSet::from_arc(lo, hi - lo));
  }
  return blocked;
}

}  // namespace

double horizontal_distance(const Position3& a, const Position3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double horizontal_azimuth(const Position3& from, const Position3& to) {
  return wrap_angle(std::atan2(to.y - from.y, to.x - from.x));
}

UserPlacement make_seat(double x, double y, double platform, const BodyModel& body) {
  UserPlacement u;
  u.seat = {x, y, body.person_height + platform};
  u.body_radius = body.body_radius;
  u.device_height = body.device_height + platform;
  u.platform_height = platform;
  u.orientation_center = wrap_angle(std::atan2(-y, -x));
  return u;
}

VenueScenario generate_grid_venue(const GridSpec& grid, std::span<const Position3> ap_positions,
                                  const BodyModel& body, int ap_antennas, int rf_chains) {
  if (grid.rows < 1 || grid.cols < 1) throw ConfigError("grid needs at least one row and column");
  if (!(grid.row_pitch > 0.0) || !(grid.col_pitch > 0.0))
    throw ConfigError("grid pitches must be positive");
  VenueScenario scenario;
  scenario.body = body;
  for (int r = 0; r < grid.rows; ++r) {
    const double y = grid.first_row_distance + r * grid.row_pitch;
    const double platform = r * grid.rake_per_row;
    for (int c = 0; c < grid.cols; ++c) {
      const double x = (c - 0.5 * (grid.cols - 1)) * grid.col_pitch;
      scenario.seats.push_back(make_seat(x, y, platform, body));
    }
  }
  for (const Position3& p : ap_positions) {
    scenario.aps.push_back({p, ap_antennas, rf_chains});
  }
  validate_scenario(scenario);
  return scenario;
}

std::vector<std::string> validate_scenario(const VenueScenario& scenario) {
  if (scenario.seats.empty()) throw ConfigError("scenario has no seats");
  if (scenario.aps.empty()) throw ConfigError("scenario has no access points");
  const OrientationModel& om = scenario.orientation;
  if (om.kind == OrientationKind::TriangularAroundCenter && !(om.half_width > 0.0 && om.half_width <= kPi))
    throw ConfigError("orientation.half_width_rad must lie in (0, pi]");
  for (std::size_t b = 0; b < scenario.aps.size(); ++b) {
    const AccessPoint& ap = scenario.aps[b];
    const std::string where = "aps[" + std::to_string(b) + "]";
    if (!std::isfinite(ap.position.x) || !std::isfinite(ap.position.y) || !std::isfinite(ap.position.z))
      throw ConfigError(where + ": non-finite position");
    if (ap.antenna_count <= 0 || ap.antenna_count % 6 != 0 || ap.antenna_count % 2 != 0)
      throw ConfigError(where + ": antenna_count must be a positive multiple of 6");
    if (ap.rf_chain_count < 1) throw ConfigError(where + ": rf_chain_count must be >= 1");
  }
  for (std::size_t s = 0; s < scenario.seats.size(); ++s) {
    const UserPlacement& u = scenario.seats[s];
    const std::string where = "seats[" + std::to_string(s) + "]";
    if (!std::isfinite(u.seat.x) || !std::isfinite(u.seat.y) || !std::isfinite(u.seat.z))
      throw ConfigError(where + ": non-finite position");
    if (!(u.body_radius > 0.0)) throw ConfigError(where + ": body_radius must be positive");
    for (std::size_t b = 0; b < scenario.aps.size(); ++b) {
      const AccessPoint& ap = scenario.aps[b];
      if (!(ap.position.z > u.device_height))
        throw ConfigError(where + ": device height must be below aps[" + std::to_string(b) + "]");
      if (horizontal_distance(u.seat, ap.position) <= u.body_radius)
        throw ConfigError(where + ": aps[" + std::to_string(b) +
                          "] lies over the seat (degenerate geometry)");
    }
  }
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < scenario.seats.size(); ++i) {
    for (std::size_t j = i + 1; j < scenario.seats.size(); ++j) {
      const UserPlacement& a = scenario.seats[i];
      const UserPlacement& b = scenario.seats[j];
      if (horizontal_distance(a.seat, b.seat) < a.body_radius + b.body_radius) {
        std::ostringstream os;
        os << "seats " << i << " and " << j << " have overlapping body disks";
        warnings.push_back(os.str());
      }
    }
  }
  return warnings;
}

ArcSet self_body_clear_arcs(const UserPlacement& user, const AccessPoint& ap) {
  const double dist = horizontal_distance(user.seat, ap.position);
  if (!(dist > user.body_radius))
    throw GeometryError("access point lies horizontally inside the body disk");
  // A device at azimuth psi on the body circle sees the AP without crossing
  // the disk iff dist * cos(psi - alpha) >= r.
  const double alpha = horizontal_azimuth(user.seat, ap.position);
  return ArcSet::centered(alpha, std::acos(user.body_radius / dist));
}

double effective_shadow_distance(double blocker_height, double device_height, double ap_height,
                                 double horizontal_distance_user_ap) {
  if (!(ap_height > device_height))
    throw ModelError("access point must be above the device plane");
  if (blocker_height <= device_height) return 0.0;
  return (blocker_height - device_height) / (ap_height - device_height) *
         horizontal_distance_user_ap;
}

namespace {

bool is_shadow_candidate(const UserPlacement& user, const UserPlacement& other,
                         const AccessPoint& ap, double user_ap_distance) {
  if (other.seat.z < user.device_height) return false;
  const double reach = effective_shadow_distance(other.seat.z, user.device_height,
                                                 ap.position.z, user_ap_distance);
  if (horizontal_distance(user.seat, other.seat) > reach) return false;
  return horizontal_distance(other.seat, ap.position) < user_ap_distance;
}

ArcSet shadow_of(const UserPlacement& user, const UserPlacement& other, const AccessPoint& ap) {
  if (!(horizontal_distance(other.seat, ap.position) > other.body_radius))
    throw GeometryError("access point lies horizontally inside a blocker's body disk");
  return shadow_on_circle(flat(user.seat), user.body_radius, flat(other.seat), other.body_radius,
                          flat(ap.position));
}

}  // namespace

ArcSet nearby_user_clear_arcs(const UserPlacement& user, std::span<const UserPlacement> others,
                              const AccessPoint& ap) {
  const double d = horizontal_distance(user.seat, ap.position);
  ArcSet blocked;
  for (const UserPlacement& other : others) {
    if (!is_shadow_candidate(user, other, ap, d)) continue;
    blocked = blocked.unite(shadow_of(user, other, ap));
  }
  return blocked.complement();
}

ArcSet nearby_user_clear_arcs(std::size_t subject, std::span<const UserPlacement> seats,
                              std::span<const std::size_t> others, const AccessPoint& ap) {
  const UserPlacement& user = seats[subject];
  const double d = horizontal_distance(user.seat, ap.position);
  ArcSet blocked;
  for (std::size_t j : others) {
    if (j == subject) continue;
    if (!is_shadow_candidate(user, seats[j], ap, d)) continue;
    blocked = blocked.unite(shadow_of(user, seats[j], ap));
  }
  return blocked.complement();
}

ArcSet clear_set(const UserPlacement& user, const AccessPoint& ap,
                 std::span<const UserPlacement> others) {
  return self_body_clear_arcs(user, ap).intersect(nearby_user_clear_arcs(user, others, ap));
}

double sample_orientation(const UserPlacement& user, const OrientationModel& model, Rng& rng) {
  switch (model.kind) {
    case OrientationKind::Fixed:
      return user.orientation_center;
    case OrientationKind::UniformCircle:
      return kTwoPi * rng.uniform();
    case OrientationKind::TriangularAroundCenter: {
      // Sum of two uniforms: symmetric triangular density on [-w, w].
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      return wrap_angle(user.orientation_center + model.half_width * (u1 + u2 - 1.0));
    }
  }
  return user.orientation_center;
}

ClearSetTable::ClearSetTable(const VenueScenario& scenario)
    : seats_(scenario.seats.size()), aps_(scenario.aps.size()) {
  sets_.reserve(seats_ * aps_);
  std::vector<std::size_t> everyone(seats_);
  for (std::size_t i = 0; i < seats_; ++i) everyone[i] = i;
  for (std::size_t s = 0; s < seats_; ++s) {
    for (std::size_t b = 0; b < aps_; ++b) {
      const AccessPoint& ap = scenario.aps[b];
      ArcSet self = self_body_clear_arcs(scenario.seats[s], ap);
      sets_.push_back(self.intersect(nearby_user_clear_arcs(s, scenario.seats, everyone, ap)));
    }
  }
}

std::vector<BlockageOutcome> realize_blockage(const VenueScenario& scenario,
                                              const ClearSetTable& table,
                                              std::span<const std::size_t> selected_seats,
                                              Rng& rng) {
  std::vector<BlockageOutcome> out;
  out.reserve(selected_seats.size() * table.ap_count());
  for (std::size_t seat : selected_seats) {
    const double psi = sample_orientation(scenario.seats[seat], scenario.orientation, rng);
    for (std::size_t b = 0; b < table.ap_count(); ++b) {
      const ArcSet& clear = table.at(seat, b);
      out.push_back({clear, psi, clear.contains(psi)});
    }
  }
  return out;
}

Position3 device_position(const UserPlacement& user, double orientation) {
  return {user.seat.x + user.body_radius * std::cos(orientation),
          user.seat.y + user.body_radius * std::sin(orientation), user.device_height};
}

}  // namespace mmnoma
