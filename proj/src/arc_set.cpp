#include "mmnoma/arc_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmnoma/common.hpp"

namespace mmnoma {

double Arc::length() const { return wraps() ? (kTwoPi - start) + end : end - start; }

double wrap_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // fmod of a tiny negative value can round to exactly 2*pi.
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double angle_difference(double a, double b) {
  double d = wrap_angle(a - b);
  if (d > kPi) d -= kTwoPi;
  return d;
}

namespace {

std::vector<Arc> normalize(std::vector<Arc> pieces) {
  pieces.erase(std::remove_if(pieces.begin(), pieces.end(),
                              [](const Arc& a) { return !(a.end > a.start); }),
               pieces.end());
  std::sort(pieces.begin(), pieces.end(),
            [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> merged;
  for (const Arc& p : pieces) {
    if (!merged.empty() && p.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, p.end);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace

ArcSet ArcSet::full() {
  ArcSet s;
  s.pieces_.push_back({0.0, kTwoPi});
  return s;
}

ArcSet ArcSet::from_arc(double start, double length) {
  if (!(length > 0.0)) return {};
  if (length >= kTwoPi) return full();
  const double s = wrap_angle(start);
  const double e = s + length;
  std::vector<Arc> pieces;
  if (e <= kTwoPi) {
    pieces.push_back({s, e});
  } else {
    pieces.push_back({s, kTwoPi});
    pieces.push_back({0.0, e - kTwoPi});
  }
  return from_pieces(std::move(pieces));
}

ArcSet ArcSet::centered(double center, double half_width) {
  return from_arc(center - half_width, 2.0 * half_width);
}

ArcSet ArcSet::from_pieces(std::vector<Arc> pieces) {
  for (Arc& p : pieces) {
    p.start = std::clamp(p.start, 0.0, kTwoPi);
    p.end = std::clamp(p.end, 0.0, kTwoPi);
  }
  ArcSet s;
  s.pieces_ = normalize(std::move(pieces));
  return s;
}

bool ArcSet::is_full() const {
  return pieces_.size() == 1 && pieces_[0].start == 0.0 && pieces_[0].end == kTwoPi;
}

bool ArcSet::contains(double angle) const {
  const double a = wrap_angle(angle);
  for (const Arc& p : pieces_) {
    if (a >= p.start && a < p.end) return true;
  }
  return false;
}

double ArcSet::measure() const {
  double m = 0.0;
  for (const Arc& p : pieces_) m += p.end - p.start;
  return m;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Arc> all = pieces_;
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  ArcSet s;
  s.pieces_ = normalize(std::move(all));
  return s;
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  std::vector<Arc> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const Arc& a = pieces_[i];
    const Arc& b = other.pieces_[j];
    const double lo = std::max(a.start, b.start);
    const double hi = std::min(a.end, b.end);
    if (hi > lo) out.push_back({lo, hi});
    if (a.end < b.end) {
      ++i;
    } else {
      ++j;
    }
  }
  ArcSet s;
  s.pieces_ = normalize(std::move(out));
  return s;
}

ArcSet ArcSet::complement() const {
  std::vector<Arc> out;
  double cursor = 0.0;
  for (const Arc& p : pieces_) {
    if (p.start > cursor) out.push_back({cursor, p.start});
    cursor = p.end;
  }
  if (cursor < kTwoPi) out.push_back({cursor, kTwoPi});
  ArcSet s;
  s.pieces_ = std::move(out);
  return s;
}

ArcSet ArcSet::rotated(double delta) const {
  if (is_full()) return full();
  std::vector<Arc> out;
  for (const Arc& a : arcs()) {
    const ArcSet rotated_arc = from_arc(a.start + delta, a.length());
    out.insert(out.end(), rotated_arc.pieces_.begin(), rotated_arc.pieces_.end());
  }
  return from_pieces(std::move(out));
}

std::vector<Arc> ArcSet::arcs() const {
  std::vector<Arc> out = pieces_;
  if (out.size() >= 2 && out.front().start == 0.0 && out.back().end == kTwoPi) {
    out.front().start = out.back().start;
    out.pop_back();
    // The wrapping arc becomes the last element so starts stay ascending.
    std::rotate(out.begin(), out.begin() + 1, out.end());
  }
  return out;
}

std::vector<double> ArcSet::boundaries() const {
  std::vector<double> out;
  if (is_full()) return out;
  for (const Arc& a : arcs()) {
    out.push_back(a.start);
    out.push_back(wrap_angle(a.end));
  }
  return out;
}

std::string ArcSet::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << "{";
  bool first = true;
  for (const Arc& a : arcs()) {
    if (!first) os << ", ";
    os << "[" << a.start << ", " << a.end << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

bool ArcSet::operator==(const ArcSet& other) const {
  if (pieces_.size() != other.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].start != other.pieces_[i].start || pieces_[i].end != other.pieces_[i].end)
      return false;
  }
  return true;
}

}  // namespace mmnoma
