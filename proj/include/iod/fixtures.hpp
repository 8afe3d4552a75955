#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iod/zone_graph.hpp"

// Canonical two- and three-zone worlds used throughout the tests, samples and
// docs. Corridor radius 10 m, sphere radius 20 m, cruise altitude 50 m.
// Coordinates are metres in a local ENU frame.

namespace iod::fixtures {

inline constexpr double kCorridorRadius = 10;
inline constexpr double kSphereRadius = 20;
inline constexpr double kAltitude = 50;

inline Element intersection(const std::string& zone, const std::string& local, Point center) {
  Element e;
  e.id = ElementId(zone, ElementKind::Intersection, local);
  e.geometry = Sphere{center, kSphereRadius};
  e.meta.capacity = default_capacity(ElementKind::Intersection);
  return e;
}

inline Element gate(const std::string& za, const std::string& zb, const std::string& local,
                    Point center) {
  Element e;
  e.id = ElementId(za, zb, local);
  e.geometry = Sphere{center, kSphereRadius};
  e.meta.capacity = default_capacity(ElementKind::Gate);
  return e;
}

// 80 m square footprint, ground to 100 m; landing-capable by default
inline Element node(const std::string& zone, const std::string& local, Point center,
                    const std::string& fuel_kind = "") {
  Element e;
  e.id = ElementId(zone, ElementKind::Node, local);
  e.geometry = Box{{center.x - 40, center.y - 40, 0}, {center.x + 40, center.y + 40, 100}};
  e.meta.capacity = default_capacity(ElementKind::Node);
  if (!fuel_kind.empty()) e.meta.components["fuel_kind"] = fuel_kind;
  return e;
}

// one directed airway per direction, named "<from>-<to>"
inline std::pair<Element, Element> airway_pair(const std::string& zone, const ElementId& from,
                                               const ElementId& to,
                                               std::vector<Point> centerline) {
  Element fwd;
  fwd.id = ElementId(zone, ElementKind::Airway, from.local + "-" + to.local);
  fwd.geometry = Corridor{centerline, kCorridorRadius};
  fwd.meta.from = from;
  fwd.meta.to = to;
  fwd.meta.capacity = default_capacity(ElementKind::Airway, polyline_length(centerline));

  Element rev = fwd;
  rev.id = ElementId(zone, ElementKind::Airway, to.local + "-" + from.local);
  std::vector<Point> back(centerline.rbegin(), centerline.rend());
  rev.geometry = Corridor{back, kCorridorRadius};
  rev.meta.from = to;
  rev.meta.to = from;
  return {fwd, rev};
}

inline void add_pair(ZoneGraph& zg, std::pair<Element, Element> pair) {
  zg.add(pair.first);
  zg.add(pair.second);
}

// FIXTURE-2Z. Zone A: node nA, intersection iA, gates g1/g2 on the A|B
// border. Zone B: intersection iB, node nB (battery fuel station).
// Airway lengths: nA-iA 100, iA-g1 100, iA-g2 200, g1-iB 100, g2-iB 50,
// iB-nB 100. Gate-to-gate transits: inside A 300 (g1-iA-g2), inside B 150
// (g1-iB-g2).
inline std::map<std::string, ZoneGraph> two_zones() {
  const double z = kAltitude;
  Element nA = node("A", "nA", {0, 0, z});
  Element iA = intersection("A", "iA", {100, 0, z});
  Element g1 = gate("A", "B", "g1", {200, 0, z});
  Element g2 = gate("A", "B", "g2", {200, 100, z});
  Element iB = intersection("B", "iB", {225, 75, z});
  Element nB = node("B", "nB", {300, 100, z}, "battery");

  ZoneGraph a;
  a.zone = "A";
  for (const auto& v : {nA, iA, g1, g2}) a.add(v);
  add_pair(a, airway_pair("A", nA.id, iA.id, {{0, 0, z}, {100, 0, z}}));
  add_pair(a, airway_pair("A", iA.id, g1.id, {{100, 0, z}, {200, 0, z}}));
  add_pair(a, airway_pair("A", iA.id, g2.id, {{100, 0, z}, {100, 100, z}, {200, 100, z}}));

  ZoneGraph b;
  b.zone = "B";
  for (const auto& v : {g1, g2, iB, nB}) b.add(v);
  add_pair(b, airway_pair("B", g1.id, iB.id, {{200, 0, z}, {225, 0, z}, {225, 75, z}}));
  add_pair(b, airway_pair("B", g2.id, iB.id, {{200, 100, z}, {225, 100, z}, {225, 75, z}}));
  add_pair(b, airway_pair("B", iB.id, nB.id, {{225, 75, z}, {300, 75, z}, {300, 100, z}}));

  return {{"A", a}, {"B", b}};
}

// FIXTURE-3Z. Chain A-B-C with two parallel gate pairs: ab1/ab2 on A|B and
// bc1/bc2 on B|C. The two B transits are ab1->bc1 = 300 m (via iB1) and
// ab2->bc2 = 600 m (via iB2); nB connects to both intersections but, being a
// node, carries no through traffic. In-A transit ab1-ab2 = 300, in-C transit
// bc1-bc2 = 300.
inline std::map<std::string, ZoneGraph> three_zones() {
  const double z = kAltitude;
  Element nA = node("A", "nA", {0, 0, z});
  Element iA = intersection("A", "iA", {100, 0, z});
  Element ab1 = gate("A", "B", "ab1", {200, 0, z});
  Element ab2 = gate("A", "B", "ab2", {200, 100, z});
  Element iB1 = intersection("B", "iB1", {350, 0, z});
  Element iB2 = intersection("B", "iB2", {500, 100, z});
  Element nB = node("B", "nB", {425, 50, z}, "battery");
  Element bc1 = gate("B", "C", "bc1", {500, 0, z});
  Element bc2 = gate("B", "C", "bc2", {750, 100, z});
  Element iC = intersection("C", "iC", {560, 80, z});
  Element nC = node("C", "nC", {560, 180, z});

  ZoneGraph a;
  a.zone = "A";
  for (const auto& v : {nA, iA, ab1, ab2}) a.add(v);
  add_pair(a, airway_pair("A", nA.id, iA.id, {{0, 0, z}, {100, 0, z}}));
  add_pair(a, airway_pair("A", iA.id, ab1.id, {{100, 0, z}, {200, 0, z}}));
  add_pair(a, airway_pair("A", iA.id, ab2.id, {{100, 0, z}, {100, 100, z}, {200, 100, z}}));

  ZoneGraph b;
  b.zone = "B";
  for (const auto& v : {ab1, ab2, iB1, iB2, nB, bc1, bc2}) b.add(v);
  add_pair(b, airway_pair("B", ab1.id, iB1.id, {{200, 0, z}, {350, 0, z}}));
  add_pair(b, airway_pair("B", iB1.id, bc1.id, {{350, 0, z}, {500, 0, z}}));
  add_pair(b, airway_pair("B", ab2.id, iB2.id, {{200, 100, z}, {500, 100, z}}));
  add_pair(b, airway_pair("B", iB2.id, bc2.id,
                          {{500, 100, z}, {500, 125, z}, {750, 125, z}, {750, 100, z}}));
  add_pair(b, airway_pair("B", iB1.id, nB.id, {{350, 0, z}, {387.5, 0, z}, {425, 50, z}}));
  add_pair(b, airway_pair("B", iB2.id, nB.id, {{500, 100, z}, {462.5, 100, z}, {425, 50, z}}));

  ZoneGraph c;
  c.zone = "C";
  for (const auto& v : {bc1, bc2, iC, nC}) c.add(v);
  add_pair(c, airway_pair("C", bc1.id, iC.id, {{500, 0, z}, {560, 80, z}}));
  add_pair(c, airway_pair("C", bc2.id, iC.id, {{750, 100, z}, {575, 100, z}, {560, 80, z}}));
  add_pair(c, airway_pair("C", iC.id, nC.id, {{560, 80, z}, {560, 180, z}}));

  return {{"A", a}, {"B", b}, {"C", c}};
}

// profile comfortably above fixture floors: battery VTOL hover-capable craft
inline PerformanceProfile default_profile() {
  PerformanceProfile p;
  p.vtol = true;
  p.hover = true;
  p.max_speed = 10;
  p.fuel_capacity = 600;
  p.fuel_kind = "battery";
  p.weight_kg = 5;
  return p;
}

}  // namespace iod::fixtures
