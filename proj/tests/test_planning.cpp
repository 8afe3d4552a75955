#include <catch2/catch_amalgamated.hpp>

#include "iod/fixtures.hpp"
#include "iod/planning.hpp"
#include "oracles.hpp"
#include "worldgen.hpp"

using namespace iod;
using Catch::Approx;

namespace {

PlanConstraints constraints() {
  PlanConstraints c;
  c.profile = fixtures::default_profile();
  c.requester_owner = "acme";
  return c;
}

// oracle paths end with dst; the planner keeps dst separate
std::vector<ElementId> interior(const oracle::PathResult& r, const ElementId& dst) {
  std::vector<ElementId> p = r.path;
  if (!p.empty() && p.back() == dst) p.pop_back();
  return p;
}

void check_against_oracle(const ZoneGraph& g, const ElementId& src, const ElementId& dst,
                          const PlanConstraints& c) {
  INFO(src.str() << " -> " << dst.str());
  auto expect = oracle::shortest_path(g, src, dst, c);
  try {
    Pathway p = shortest_pathway(g, src, dst, c);
    REQUIRE(expect.has_value());
    CHECK(p.elements == interior(*expect, dst));
    CHECK(p.length_m == Approx(expect->dist));
    CHECK(pathway_well_formed(g, p));

    auto want_contingency = oracle::contingency(g, p, c);
    try {
      attach_contingency(g, p, c);
      REQUIRE(want_contingency.has_value());
      CHECK(p.contingency == *want_contingency);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NoContingency);
      CHECK_FALSE(want_contingency.has_value());
    }
  } catch (const Error& e) {
    if (e.code() == Errc::UnknownElement) throw;
    CHECK_FALSE(expect.has_value());
  }
}

}  // namespace

TEST_CASE("frozen pathway nA -> g1 in the two-zone fixture") {
  ZoneGraph a = fixtures::two_zones().at("A");
  ElementId nA("A", ElementKind::Node, "nA");
  ElementId g1("A", "B", "g1");

  Pathway p = plan_pathway(a, nA, g1, constraints());
  std::vector<ElementId> want{ElementId("A", ElementKind::Airway, "nA-iA"),
                              ElementId("A", ElementKind::Intersection, "iA"),
                              ElementId("A", ElementKind::Airway, "iA-g1")};
  CHECK(p.elements == want);
  CHECK(p.length_m == Approx(200));
  CHECK(p.contingency == nA);
  CHECK(p.contingency_extra_m == Approx(200));  // g1 -> iA -> nA
  CHECK(pathway_well_formed(a, p));
  CHECK(p.covers(nA));
  CHECK(p.covers(ElementId("A", ElementKind::Intersection, "iA")));
  CHECK_FALSE(p.covers(ElementId("A", "B", "g2")));
}

TEST_CASE("identity pathway") {
  ZoneGraph a = fixtures::two_zones().at("A");
  ElementId nA("A", ElementKind::Node, "nA");
  Pathway p = plan_pathway(a, nA, nA, constraints());
  CHECK(p.elements.empty());
  CHECK(p.length_m == 0);
  CHECK(p.contingency == nA);
  CHECK(p.contingency_extra_m == 0);
  CHECK(pathway_well_formed(a, p));
}

TEST_CASE("pathway from mid-airway starts at the airway exit") {
  ZoneGraph a = fixtures::two_zones().at("A");
  ElementId aw("A", ElementKind::Airway, "nA-iA");
  ElementId g1("A", "B", "g1");
  Pathway p = shortest_pathway(a, aw, g1, constraints());
  std::vector<ElementId> want{ElementId("A", ElementKind::Intersection, "iA"),
                              ElementId("A", ElementKind::Airway, "iA-g1")};
  CHECK(p.elements == want);
  CHECK(p.length_m == Approx(100));  // the airway already being flown costs nothing
}

TEST_CASE("error discrimination names the blocking filter") {
  ElementId nA("A", ElementKind::Node, "nA");
  ElementId iA("A", ElementKind::Intersection, "iA");
  ElementId aw("A", ElementKind::Airway, "nA-iA");
  ElementId g1("A", "B", "g1");
  auto code_of = [&](const ZoneGraph& g, const PlanConstraints& c) {
    try {
      plan_pathway(g, nA, g1, c);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::NoCandidates;  // sentinel: no throw
  };

  SECTION("structural dead end is NoPath") {
    ZoneGraph g = fixtures::two_zones().at("A");
    PlanConstraints c = constraints();
    c.excluded.insert(iA);  // the only route out of nA runs through iA
    CHECK(code_of(g, c) == Errc::NoPath);
  }
  SECTION("performance floor above the profile is PerformanceInsufficient") {
    ZoneGraph g = fixtures::two_zones().at("A");
    g.edges.at(aw).meta.min_performance.max_speed = 12;  // profile flies 10
    CHECK(code_of(g, constraints()) == Errc::PerformanceInsufficient);
  }
  SECTION("private element without listing is AccessDenied") {
    ZoneGraph g = fixtures::two_zones().at("A");
    g.edges.at(aw).meta.access.is_private = true;
    g.edges.at(aw).meta.access.allowlist = {"someone-else"};
    CHECK(code_of(g, constraints()) == Errc::AccessDenied);
  }
  SECTION("airway destination is rejected") {
    ZoneGraph g = fixtures::two_zones().at("A");
    try {
      plan_pathway(g, nA, aw, constraints());
      FAIL("expected UnknownElement");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnknownElement);
    }
  }
}

TEST_CASE("wind raises the effective performance floor") {
  ZoneGraph g = fixtures::two_zones().at("A");
  ElementId aw("A", ElementKind::Airway, "nA-iA");
  g.edges.at(aw).meta.min_performance.max_speed = 8;  // profile 10 clears it in calm air

  PlanConstraints c = constraints();
  ElementId nA("A", ElementKind::Node, "nA");
  ElementId g1("A", "B", "g1");
  CHECK(plan_pathway(g, nA, g1, c).length_m == Approx(200));

  c.wind_speed = 3;  // 8 + 3 > 10
  try {
    plan_pathway(g, nA, g1, c);
    FAIL("expected PerformanceInsufficient");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PerformanceInsufficient);
  }
}

TEST_CASE("well-formedness rejects corrupted pathways") {
  ZoneGraph a = fixtures::two_zones().at("A");
  ElementId nA("A", ElementKind::Node, "nA");
  ElementId g1("A", "B", "g1");
  Pathway p = plan_pathway(a, nA, g1, constraints());

  Pathway broken = p;
  broken.elements.insert(broken.elements.begin() + 1, nA);  // node in the interior
  CHECK_FALSE(pathway_well_formed(a, broken));

  broken = p;
  std::swap(broken.elements[0], broken.elements[2]);  // adjacency broken
  CHECK_FALSE(pathway_well_formed(a, broken));

  broken = p;
  broken.elements.erase(broken.elements.begin() + 1);  // airway meets airway
  CHECK_FALSE(pathway_well_formed(a, broken));
}

TEST_CASE("planner agrees with the enumeration oracle on the fixtures") {
  PlanConstraints c = constraints();
  for (auto world : {fixtures::two_zones(), fixtures::three_zones()}) {
    for (const auto& [name, zg] : world) {
      std::vector<ElementId> srcs;
      for (const auto& [id, e] : zg.vertices) srcs.push_back(id);
      for (const auto& [id, e] : zg.edges) srcs.push_back(id);
      for (const auto& src : srcs)
        for (const auto& [dst, e] : zg.vertices) check_against_oracle(zg, src, dst, c);
    }
  }
}

TEST_CASE("planner agrees with the oracle on generated worlds") {
  for (std::uint64_t seed : {11u, 42u, 77u}) {
    auto world = testgen::random_world(seed);
    PlanConstraints c;
    c.profile = testgen::query_profile();
    c.requester_owner = "acme";
    for (const auto& [name, zg] : world)
      for (const auto& [src, se] : zg.vertices)
        for (const auto& [dst, de] : zg.vertices) check_against_oracle(zg, src, dst, c);
  }
}
