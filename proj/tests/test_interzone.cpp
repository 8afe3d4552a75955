#include <catch2/catch_amalgamated.hpp>

#include "iod/fixtures.hpp"
#include "iod/interzone.hpp"
#include "oracles.hpp"

using namespace iod;
using Catch::Approx;

namespace {

double cost_of(const InterzoneGraph& ig, const std::string& zone, const ElementId& from,
               const ElementId& to) {
  for (const auto& t : ig.transits)
    if (t.zone == zone && t.from_gate == from && t.to_gate == to) return t.cost;
  FAIL("missing transit " << zone << " " << from.str() << " -> " << to.str());
  return -1;
}

}  // namespace

TEST_CASE("two-zone interzone graph has the frozen transit costs") {
  InterzoneGraph ig = derive_interzone(fixtures::two_zones());
  ElementId g1("A", "B", "g1"), g2("A", "B", "g2");
  REQUIRE(ig.gates == std::vector<ElementId>{g1, g2});
  REQUIRE(ig.transits.size() == 4);
  CHECK(cost_of(ig, "A", g1, g2) == Approx(300));  // g1 -> iA -> g2
  CHECK(cost_of(ig, "A", g2, g1) == Approx(300));
  CHECK(cost_of(ig, "B", g1, g2) == Approx(150));  // g1 -> iB -> g2
  CHECK(cost_of(ig, "B", g2, g1) == Approx(150));
}

TEST_CASE("three-zone interzone graph: parallel B transits at 300 and 600") {
  InterzoneGraph ig = derive_interzone(fixtures::three_zones());
  ElementId ab1("A", "B", "ab1"), ab2("A", "B", "ab2");
  ElementId bc1("B", "C", "bc1"), bc2("B", "C", "bc2");
  REQUIRE(ig.gates.size() == 4);
  REQUIRE(ig.transits.size() == 8);
  CHECK(cost_of(ig, "B", ab1, bc1) == Approx(300));
  CHECK(cost_of(ig, "B", ab2, bc2) == Approx(600));
  CHECK(cost_of(ig, "A", ab1, ab2) == Approx(300));
  CHECK(cost_of(ig, "C", bc1, bc2) == Approx(300));
  // nB is a node: nothing routes ab1 -> ab2 through zone B
  for (const auto& t : ig.transits)
    CHECK_FALSE((t.zone == "B" && t.from_gate == ab1 && t.to_gate == ab2));
}

TEST_CASE("derive_interzone refuses invalid zone graphs") {
  auto world = fixtures::two_zones();
  world.at("A").edges.begin()->second.meta.from.reset();
  try {
    derive_interzone(world);
    FAIL("expected ValidationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationFailed);
  }
}

TEST_CASE("ecn level and effective cost") {
  Transit t{ElementId("A", "B", "ab1"), ElementId("B", "C", "bc1"), "B", 300};
  EcnNotice on_transit{"zsp-b", "B", t.from_gate, t.to_gate, 0.5, 10, 30};
  EcnNotice on_gate{"zsp-b", "B", std::nullopt, t.to_gate, 0.25, 10, 30};

  CHECK(ecn_level({}, t, 10) == 0);
  CHECK(ecn_level({on_transit}, t, 10) == Approx(0.5));
  CHECK(ecn_level({on_transit}, t, 39) == Approx(0.5));  // last covered tick
  CHECK(ecn_level({on_transit}, t, 40) == 0);            // expired at issued_at + ttl
  CHECK(ecn_level({on_transit, on_gate}, t, 10) == Approx(0.5));  // max wins

  // the gate-subject notice also penalizes other transits into bc1
  Transit other{ElementId("B", "C", "bc2"), t.to_gate, "C", 300};
  CHECK(ecn_level({on_gate}, other, 10) == Approx(0.25));
  CHECK(ecn_level({on_transit}, other, 10) == 0);

  CHECK(effective_cost(t, 0) == Approx(300));
  CHECK(effective_cost(t, 0.5) == Approx(600));
  CHECK(effective_cost(t, 1.0) == Approx(900));
}

TEST_CASE("full ECN notice flips the route and expiry restores it") {
  InterzoneGraph ig = derive_interzone(fixtures::three_zones());
  ElementId ab1("A", "B", "ab1"), ab2("A", "B", "ab2");
  ElementId bc1("B", "C", "bc1"), bc2("B", "C", "bc2");

  CHECK(plan_route(ig, "A", "C", {}, 0) == std::vector<ElementId>{ab1, bc1});
  CHECK(next_gate(ig, "A", "C", {}, 0) == ab1);

  // level 1.0 on the 300 m transit: 900 effective beats the 600 m alternative
  std::vector<EcnNotice> notices{{"zsp-b", "B", ab1, bc1, 1.0, 5, 30}};
  CHECK(plan_route(ig, "A", "C", notices, 5) == std::vector<ElementId>{ab2, bc2});
  CHECK(next_gate(ig, "A", "C", notices, 5) == ab2);

  CHECK(next_gate(ig, "A", "C", notices, 35) == ab1);  // expired at tick 35
}

TEST_CASE("same-zone and unreachable routes") {
  InterzoneGraph ig = derive_interzone(fixtures::three_zones());
  CHECK(plan_route(ig, "B", "B", {}, 0).empty());
  CHECK_FALSE(next_gate(ig, "B", "B", {}, 0).has_value());
  try {
    plan_route(ig, "A", "Z", {}, 0);
    FAIL("expected Unreachable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Unreachable);
  }
}

TEST_CASE("route planner agrees with the enumeration oracle") {
  InterzoneGraph ig = derive_interzone(fixtures::three_zones());
  std::vector<std::string> zones{"A", "B", "C"};
  std::vector<std::vector<EcnNotice>> cases{
      {},
      {{"z", "B", ElementId("A", "B", "ab1"), ElementId("B", "C", "bc1"), 1.0, 0, 30}},
      {{"z", "B", std::nullopt, ElementId("B", "C", "bc1"), 0.7, 0, 30}},
      {{"z", "B", ElementId("A", "B", "ab1"), ElementId("B", "C", "bc1"), 0.4, 0, 30},
       {"z", "C", std::nullopt, ElementId("B", "C", "bc2"), 0.9, 0, 30}},
  };
  for (const auto& notices : cases)
    for (const auto& src : zones)
      for (const auto& dst : zones) {
        INFO(src << " -> " << dst << " with " << notices.size() << " notices");
        auto want = oracle::best_route(ig, src, dst, notices, 0);
        REQUIRE(want.has_value());
        CHECK(plan_route(ig, src, dst, notices, 0) == *want);
      }
}
