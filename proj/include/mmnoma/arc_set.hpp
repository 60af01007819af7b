#pragma once

#include <string>
#include <vector>

namespace mmnoma {

/// Half-open angular interval [start, end) in radians.
///
/// Inside an ArcSet pieces satisfy 0 <= start < end <= 2*pi. The arcs() view
/// may return a wrapping arc with start > end, meaning [start, 2*pi) U [0, end).
struct Arc {
  double start = 0.0;
  double end = 0.0;

  double length() const;
  bool wraps() const { return start > end; }
};

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double angle);

/// Signed smallest difference a - b wrapped into (-pi, pi].
double angle_difference(double a, double b);

/// A union of disjoint arcs on the circle.
///
/// Stored canonically as sorted, disjoint, non-touching pieces inside
/// [0, 2*pi]; an arc crossing angle 0 is held as two pieces. Set operations
/// only compare and copy endpoints, so union/intersection/complement are exact.
class ArcSet {
 public:
  ArcSet() = default;

  static ArcSet full();

  /// Counter-clockwise arc of the given length starting at `start`.
  /// length <= 0 gives the empty set, length >= 2*pi the full circle.
  static ArcSet from_arc(double start, double length);

  /// Arc centered at `center` spanning +-half_width.
  static ArcSet centered(double center, double half_width);

  /// Union of arbitrary pieces already inside [0, 2*pi].
  static ArcSet from_pieces(std::vector<Arc> pieces);

  bool empty() const { return pieces_.empty(); }
  bool is_full() const;
  bool contains(double angle) const;
  double measure() const;

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  ArcSet complement() const;
  ArcSet subtract(const ArcSet& other) const { return intersect(other.complement()); }
  ArcSet rotated(double delta) const;

  /// Canonical pieces split at angle 0.
  const std::vector<Arc>& pieces() const { return pieces_; }

  /// Maximal arcs, merging the pieces that meet at angle 0.
  std::vector<Arc> arcs() const;

  /// Endpoints of the maximal arcs (starts and ends), unsorted.
  std::vector<double> boundaries() const;

  std::string to_string() const;

  bool operator==(const ArcSet& other) const;

 private:
  std::vector<Arc> pieces_;
};

}  // namespace mmnoma
