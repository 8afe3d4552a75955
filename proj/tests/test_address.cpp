#include <catch2/catch_amalgamated.hpp>

#include "iod/address.hpp"

using namespace iod;

TEST_CASE("address round trips through parse and str") {
  for (const char* text : {"A/node/nA", "A/intersection/iA", "A/airway/nA-iA", "A+B/gate/g1"}) {
    ElementId id = parse_address(text);
    CHECK(id.str() == text);
    CHECK(parse_address(id.str()) == id);
  }
}

TEST_CASE("gate zone tokens are stored sorted") {
  ElementId a = parse_address("A+B/gate/g1");
  ElementId b = parse_address("B+A/gate/g1");
  CHECK(a == b);
  CHECK(a.str() == "A+B/gate/g1");
  CHECK(ElementId("B", "A", "g1") == a);
  CHECK(a.in_zone("A"));
  CHECK(a.in_zone("B"));
  CHECK_FALSE(a.in_zone("C"));
}

TEST_CASE("malformed addresses are rejected") {
  auto code = [](const char* text) {
    try {
      parse_address(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::NoCandidates;  // sentinel: no throw
  };
  CHECK(code("A/node") == Errc::MalformedAddress);          // missing local
  CHECK(code("A/tower/t1") == Errc::MalformedAddress);      // unknown kind
  CHECK(code("A+B/node/n1") == Errc::MalformedAddress);     // two zones, not a gate
  CHECK(code("A/gate/g1") == Errc::MalformedAddress);       // gate needs two zones
  CHECK(code("A+A/gate/g1") == Errc::MalformedAddress);     // duplicate zone token
  CHECK(code("/node/n1") == Errc::MalformedAddress);        // empty zone
  CHECK(code("A/node/") == Errc::MalformedAddress);         // empty local
  CHECK(code("A+/gate/g1") == Errc::MalformedAddress);      // empty second token
}

TEST_CASE("ordering follows the rendered form") {
  ElementId a("A", ElementKind::Airway, "x");
  ElementId b("A", ElementKind::Intersection, "x");
  ElementId c("B", ElementKind::Airway, "x");
  CHECK(a < b);  // "A/airway/x" < "A/intersection/x"
  CHECK(a < c);
  CHECK_FALSE(b < a);
}
