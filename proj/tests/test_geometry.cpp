#include <catch2/catch_amalgamated.hpp>

#include "iod/geometry.hpp"

using namespace iod;
using Catch::Approx;

TEST_CASE("containment is boundary inclusive on every shape") {
  Corridor c{{{0, 0, 50}, {100, 0, 50}}, 10};
  CHECK(contains(c, {50, 10, 50}));      // exactly on the tube wall
  CHECK(contains(c, {0, 0, 60}));        // end cap top
  CHECK_FALSE(contains(c, {50, 10.1, 50}));
  CHECK(contains(c, {50, 10 + kGeomEps / 2, 50}));  // inside the tolerance band

  Sphere s{{0, 0, 50}, 20};
  CHECK(contains(s, {0, 0, 70}));
  CHECK_FALSE(contains(s, {0, 0, 70.1}));

  Box b{{-40, -40, 0}, {40, 40, 100}};
  CHECK(contains(b, {40, 40, 100}));
  CHECK(contains(b, {-40, -40, 0}));
  CHECK_FALSE(contains(b, {40.1, 0, 50}));
}

TEST_CASE("segment distance handles interior, endpoint and degenerate cases") {
  CHECK(segment_distance({50, 10, 0}, {0, 0, 0}, {100, 0, 0}) == Approx(10));
  CHECK(segment_distance({-30, 40, 0}, {0, 0, 0}, {100, 0, 0}) == Approx(50));
  CHECK(segment_distance({3, 4, 0}, {0, 0, 0}, {0, 0, 0}) == Approx(5));  // zero length
}

TEST_CASE("polyline arc parametrization") {
  std::vector<Point> pts{{0, 0, 0}, {100, 0, 0}, {100, 50, 0}};
  CHECK(polyline_length(pts) == Approx(150));
  CHECK(point_at_arc(pts, 0) == Point{0, 0, 0});
  CHECK(point_at_arc(pts, 100) == Point{100, 0, 0});
  CHECK(point_at_arc(pts, 125) == Point{100, 25, 0});
  CHECK(point_at_arc(pts, 999) == Point{100, 50, 0});  // clamps to the end
  CHECK(point_at_arc(pts, -5) == Point{0, 0, 0});

  CHECK(arc_of_closest(pts, {60, 5, 0}) == Approx(60));
  CHECK(arc_of_closest(pts, {120, 30, 0}) == Approx(130));
  CHECK(arc_of_closest(pts, {-50, 0, 0}) == Approx(0));
}

TEST_CASE("top altitude per shape") {
  CHECK(top_altitude(Corridor{{{0, 0, 50}, {100, 0, 60}}, 10}) == Approx(70));
  CHECK(top_altitude(Sphere{{0, 0, 140}, 20}) == Approx(160));
  CHECK(top_altitude(Box{{0, 0, 0}, {80, 80, 100}}) == Approx(100));
}

TEST_CASE("center of each shape") {
  CHECK(center_of(Corridor{{{0, 0, 0}, {100, 0, 0}}, 10}) == Point{50, 0, 0});
  CHECK(center_of(Sphere{{1, 2, 3}, 20}) == Point{1, 2, 3});
  CHECK(center_of(Box{{0, 0, 0}, {80, 80, 100}}) == Point{40, 40, 50});
}
