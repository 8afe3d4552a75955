#include <catch2/catch_amalgamated.hpp>

#include "iod/fixtures.hpp"
#include "iod/flight_plan.hpp"
#include "iod/planning.hpp"

using namespace iod;
using Catch::Approx;

namespace {

Pathway plan_na_g1(const ZoneGraph& a) {
  PlanConstraints c;
  c.profile = fixtures::default_profile();
  return plan_pathway(a, ElementId("A", ElementKind::Node, "nA"), ElementId("A", "B", "g1"), c);
}

}  // namespace

TEST_CASE("chain spans partition the straight nA -> g1 run") {
  ZoneGraph a = fixtures::two_zones().at("A");
  FlightChain chain = FlightChain::build(a, plan_na_g1(a));

  CHECK(chain.total() == Approx(200));
  REQUIRE(chain.elements().size() == 5);  // nA, nA-iA, iA, iA-g1, g1

  const auto& spans = chain.spans();
  REQUIRE(spans.size() == 5);
  CHECK(spans.front().lo == 0);
  CHECK(spans.back().hi == Approx(chain.total()));
  for (std::size_t i = 1; i < spans.size(); ++i) {
    CHECK(spans[i].lo == Approx(spans[i - 1].hi));  // gap- and overlap-free
    CHECK(spans[i].lo <= spans[i].hi);
  }

  // frozen geometry: node box half-width 40, sphere radius 20
  CHECK(spans[0].hi == Approx(40).margin(0.01));    // leave the nA box at x = 40
  CHECK(spans[2].lo == Approx(80).margin(0.01));    // enter the iA sphere
  CHECK(spans[2].hi == Approx(120).margin(0.01));   // leave it
  CHECK(spans[4].lo == Approx(180).margin(0.01));   // enter the g1 sphere

  // every sampled point sits inside the span's element
  for (const auto& s : spans) {
    const Element* e = a.find(s.element);
    REQUIRE(e != nullptr);
    for (double arc : sample_arcs(s.hi - s.lo, 5))
      CHECK(contains(e->geometry, chain.point_at(s.lo + arc)));
  }
}

TEST_CASE("span lookup: boundaries belong to the later span") {
  ZoneGraph a = fixtures::two_zones().at("A");
  FlightChain chain = FlightChain::build(a, plan_na_g1(a));
  const auto& spans = chain.spans();

  CHECK(chain.span_at(0).element == spans[0].element);
  CHECK(chain.span_at(spans[0].hi).element == spans[1].element);
  CHECK(chain.span_at(chain.total()).element == spans.back().element);
  CHECK(chain.span_at(chain.total() + 5).element == spans.back().element);  // clamp

  CHECK(chain.span_index(ElementId("A", ElementKind::Intersection, "iA")) == 2);
  CHECK_FALSE(chain.span_index(ElementId("A", "B", "g2")).has_value());
}

TEST_CASE("point_at interpolates and clamps") {
  ZoneGraph a = fixtures::two_zones().at("A");
  FlightChain chain = FlightChain::build(a, plan_na_g1(a));
  CHECK(chain.point_at(0) == Point{0, 0, 50});
  CHECK(chain.point_at(100) == Point{100, 0, 50});
  CHECK(chain.point_at(250) == Point{200, 0, 50});
  CHECK(chain.point_at(-10) == Point{0, 0, 50});
}

TEST_CASE("sample_arcs covers both ends with steps no longer than max_step") {
  auto arcs = sample_arcs(200);
  REQUIRE(arcs.size() == 9);  // 8 steps of 25
  CHECK(arcs.front() == 0);
  CHECK(arcs.back() == Approx(200));
  for (std::size_t i = 1; i < arcs.size(); ++i) CHECK(arcs[i] - arcs[i - 1] <= 25 + 1e-9);

  CHECK(sample_arcs(0) == std::vector<double>{0});
  CHECK(sample_arcs(10) == std::vector<double>{0, 10});
  auto uneven = sample_arcs(60);  // 3 steps of 20
  CHECK(uneven.size() == 4);
  CHECK(uneven[1] == Approx(20));
}

TEST_CASE("trajectories per element kind") {
  ZoneGraph a = fixtures::two_zones().at("A");
  Pathway p = plan_na_g1(a);
  PerformanceProfile profile = fixtures::default_profile();

  SECTION("airway trajectory follows the full centerline") {
    Trajectory t = make_trajectory(a, p, ElementId("A", ElementKind::Airway, "nA-iA"), profile);
    REQUIRE(t.waypoints.size() == 5);  // 100 m at 25 m steps
    CHECK(t.waypoints.front() == Point{0, 0, 50});
    CHECK(t.waypoints.back() == Point{100, 0, 50});
    REQUIRE(t.speeds.size() == t.waypoints.size());
    for (double s : t.speeds) CHECK(s == Approx(10));
  }
  SECTION("vertex trajectory covers the chain stretch inside the shape") {
    Trajectory t = make_trajectory(a, p, ElementId("A", ElementKind::Intersection, "iA"), profile);
    const Element* iA = a.find(ElementId("A", ElementKind::Intersection, "iA"));
    REQUIRE(t.waypoints.size() >= 2);
    for (const auto& w : t.waypoints) CHECK(contains(iA->geometry, w));
  }
  SECTION("element speed limit caps the profile speed") {
    a.edges.at(ElementId("A", ElementKind::Airway, "nA-iA")).meta.components["speed_limit"] = "6";
    Trajectory t = make_trajectory(a, p, ElementId("A", ElementKind::Airway, "nA-iA"), profile);
    for (double s : t.speeds) CHECK(s == Approx(6));
  }
  SECTION("elements off the pathway are rejected") {
    try {
      make_trajectory(a, p, ElementId("A", "B", "g2"), profile);
      FAIL("expected NotOnPathway");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NotOnPathway);
    }
  }
}

TEST_CASE("chain through a bent airway stays inside its corridor") {
  ZoneGraph a = fixtures::two_zones().at("A");
  PlanConstraints c;
  c.profile = fixtures::default_profile();
  // nA -> g2 runs the two-segment iA-g2 corridor
  Pathway p = plan_pathway(a, ElementId("A", ElementKind::Node, "nA"), ElementId("A", "B", "g2"), c);
  FlightChain chain = FlightChain::build(a, p);
  CHECK(chain.total() == Approx(300));
  for (double arc : sample_arcs(chain.total(), 10)) {
    const ChainSpan& s = chain.span_at(arc);
    const Element* e = a.find(s.element);
    REQUIRE(e != nullptr);
    CHECK(contains(e->geometry, chain.point_at(arc)));
  }
}
