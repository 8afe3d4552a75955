#include <catch2/catch_amalgamated.hpp>

#include "iod/fixtures.hpp"
#include "iod/zone_graph.hpp"
#include "mutants.hpp"
#include "worldgen.hpp"

using namespace iod;

TEST_CASE("fixture zones validate cleanly") {
  for (const auto& [name, zg] : fixtures::two_zones()) {
    auto report = validate_zone_graph(zg);
    INFO("zone " << name);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
  }
  for (const auto& [name, zg] : fixtures::three_zones()) {
    INFO("zone " << name);
    CHECK(validate_zone_graph(zg).ok());
  }
}

TEST_CASE("each curated single-edit mutant trips its rule") {
  for (const auto& m : testgen::zone_mutants()) {
    auto report = validate_zone_graph(m.graph);
    INFO("mutant " << m.code);
    CHECK_FALSE(report.ok());
    CHECK(report.has_error(m.code));
  }
}

TEST_CASE("altitude above 152.4 m warns without failing validation") {
  auto report = validate_zone_graph(testgen::altitude_mutant());
  CHECK(report.ok());
  CHECK(report.has_warning("altitude-advisory"));
}

TEST_CASE("graph accessors") {
  ZoneGraph a = fixtures::two_zones().at("A");
  CHECK(a.gates().size() == 2);
  CHECK(a.adjacent_zones() == std::vector<std::string>{"B"});

  ElementId iA("A", ElementKind::Intersection, "iA");
  auto out = a.out_airways(iA);
  REQUIRE(out.size() == 3);
  CHECK(out[0]->id.local == "iA-g1");
  CHECK(out[1]->id.local == "iA-g2");
  CHECK(out[2]->id.local == "iA-nA");

  CHECK(a.contains_element(iA));
  CHECK(a.find(ElementId("A", ElementKind::Airway, "nA-iA")) != nullptr);
  CHECK(a.find(ElementId("A", ElementKind::Node, "ghost")) == nullptr);
}

TEST_CASE("generated worlds always validate") {
  for (std::uint64_t seed : {7u, 21u, 99u}) {
    auto world = testgen::random_world(seed);
    for (const auto& [name, zg] : world) {
      INFO("seed " << seed << " zone " << name);
      CHECK(validate_zone_graph(zg).ok());
      CHECK(zg.vertices.size() <= 12);
    }
  }
}
