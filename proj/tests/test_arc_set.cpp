#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmnoma/arc_set.hpp"
#include "mmnoma/common.hpp"
#include "mmnoma/rng.hpp"

using namespace mmnoma;

namespace {

ArcSet random_set(Rng& rng) {
  ArcSet s;
  const int n = static_cast<int>(rng.uniform_index(4));
  for (int i = 0; i < n; ++i)
    s = s.unite(ArcSet::from_arc(rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 2.5)));
  return s;
}

// Fraction of a fine grid inside the set, times 2 pi.
double sampled_measure(const ArcSet& s, int samples) {
  int in = 0;
  for (int i = 0; i < samples; ++i) in += s.contains((i + 0.5) * kTwoPi / samples);
  return kTwoPi * in / samples;
}

}  // namespace

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
  CHECK(angle_difference(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(angle_difference(kTwoPi - 0.1, 0.1) == doctest::Approx(-0.2));
}

TEST_CASE("basic construction") {
  CHECK(ArcSet{}.empty());
  CHECK(ArcSet::full().is_full());
  CHECK(ArcSet::full().measure() == doctest::Approx(kTwoPi));
  CHECK(ArcSet::from_arc(1.0, 0.0).empty());
  CHECK(ArcSet::from_arc(1.0, 7.0).is_full());

  const ArcSet wrap = ArcSet::from_arc(kTwoPi - 0.5, 1.0);
  CHECK(wrap.pieces().size() == 2);
  CHECK(wrap.arcs().size() == 1);
  CHECK(wrap.arcs()[0].wraps());
  CHECK(wrap.measure() == doctest::Approx(1.0));
  CHECK(wrap.contains(0.0));
  CHECK(wrap.contains(kTwoPi - 0.25));
  CHECK_FALSE(wrap.contains(0.5));

  const ArcSet c = ArcSet::centered(0.0, kPi / 4);
  CHECK(c.contains(0.7));
  CHECK(c.contains(kTwoPi - 0.7));
  CHECK_FALSE(c.contains(kPi));
  CHECK(c.measure() == doctest::Approx(kPi / 2));
}

TEST_CASE("union merges touching pieces") {
  const ArcSet a = ArcSet::from_arc(0.0, 1.0).unite(ArcSet::from_arc(1.0, 1.0));
  CHECK(a.pieces().size() == 1);
  CHECK(a.measure() == doctest::Approx(2.0));
  CHECK(ArcSet::from_arc(0.0, 1.0).intersect(ArcSet::from_arc(2.0, 1.0)).empty());
}

TEST_CASE("inclusion-exclusion and complement are exact") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const ArcSet s = random_set(rng), t = random_set(rng);
    const double lhs = s.intersect(t).measure() + s.unite(t).measure();
    const double rhs = s.measure() + t.measure();
    REQUIRE(std::abs(lhs - rhs) < 1e-12);
    REQUIRE(s.complement().complement() == s);
    REQUIRE(std::abs(s.measure() + s.complement().measure() - kTwoPi) < 1e-12);
    REQUIRE(s.subtract(t).intersect(t).measure() < 1e-12);
  }
}

TEST_CASE("measure agrees with point sampling") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const ArcSet s = random_set(rng);
    CHECK(std::abs(sampled_measure(s, 200000) - s.measure()) < 1e-3);
  }
}

TEST_CASE("rotation") {
  const ArcSet s = ArcSet::from_arc(1.0, 0.5).unite(ArcSet::from_arc(4.0, 1.0));
  const ArcSet r = s.rotated(2.0);
  CHECK(r.measure() == doctest::Approx(s.measure()));
  CHECK(r.contains(3.2));
  CHECK(r.contains(6.5 - kTwoPi));
  CHECK_FALSE(r.contains(1.2));
  CHECK(s.rotated(kTwoPi).measure() == doctest::Approx(s.measure()));
  CHECK_FALSE(s.to_string().empty());
}

TEST_CASE("boundaries list every endpoint") {
  const ArcSet s = ArcSet::from_arc(1.0, 0.5).unite(ArcSet::from_arc(kTwoPi - 0.2, 0.4));
  CHECK(s.boundaries().size() == 4);
  CHECK(ArcSet::full().boundaries().empty());
}
