#pragma once

// Curated invalid zone graphs: each starts from the valid two-zone fixture's
// zone A and applies exactly one edit chosen to trip one validator rule. The
// expected code must appear in the report; cascade errors (a re-keyed vertex
// leaves old airway endpoints dangling) are allowed alongside it.

#include <string>
#include <utility>
#include <vector>

#include "iod/fixtures.hpp"
#include "iod/zone_graph.hpp"

namespace iod::testgen {

struct Mutant {
  std::string code;  // expected error code
  ZoneGraph graph;
};

namespace detail {

inline ZoneGraph base_zone() { return fixtures::two_zones().at("A"); }

inline ElementId nA() { return {"A", ElementKind::Node, "nA"}; }
inline ElementId iA() { return {"A", ElementKind::Intersection, "iA"}; }
inline ElementId aw() { return {"A", ElementKind::Airway, "nA-iA"}; }

// move a vertex under a new id without touching the airways that referenced it
inline void rekey_vertex(ZoneGraph& g, const ElementId& old_id, ElementId new_id) {
  Element e = g.vertices.at(old_id);
  g.vertices.erase(old_id);
  e.id = std::move(new_id);
  g.vertices.emplace(e.id, std::move(e));
}

}  // namespace detail

inline std::vector<Mutant> zone_mutants() {
  using namespace detail;
  std::vector<Mutant> out;
  auto with = [&](const std::string& code, auto edit) {
    ZoneGraph g = base_zone();
    edit(g);
    out.push_back({code, std::move(g)});
  };

  with("duplicate-id", [](ZoneGraph& g) {
    g.edges.emplace(iA(), g.vertices.at(iA()));  // same address in both maps
  });
  with("gate-zone-count", [](ZoneGraph& g) {
    ElementId gate("A", "B", "g1");
    Element e = g.vertices.at(gate);
    g.vertices.erase(gate);
    e.id.zones = {"A"};
    g.vertices.emplace(e.id, std::move(e));
  });
  with("zone-count", [](ZoneGraph& g) {
    ElementId two = iA();
    two.zones = {"A", "B"};
    rekey_vertex(g, iA(), two);
  });
  with("foreign-element", [](ZoneGraph& g) {
    rekey_vertex(g, nA(), {"Z", ElementKind::Node, "nA"});
  });
  with("edge-in-vertices", [](ZoneGraph& g) {
    Element e;
    e.id = ElementId("A", ElementKind::Airway, "ghost");
    e.geometry = Corridor{{{0, 0, 50}, {50, 0, 50}}, fixtures::kCorridorRadius};
    g.vertices.emplace(e.id, std::move(e));
  });
  with("vertex-in-edges", [](ZoneGraph& g) {
    Element e = fixtures::intersection("A", "ghost", {50, 50, 50});
    g.edges.emplace(e.id, std::move(e));
  });
  with("kind-geometry-mismatch", [](ZoneGraph& g) {
    g.vertices.at(iA()).geometry = Box{{0, 0, 0}, {10, 10, 10}};
  });
  with("bad-radius", [](ZoneGraph& g) {
    std::get<Corridor>(g.edges.at(aw()).geometry).radius = 0;
  });
  with("short-centerline", [](ZoneGraph& g) {
    std::get<Corridor>(g.edges.at(aw()).geometry).centerline.resize(1);
  });
  with("duplicate-centerline-point", [](ZoneGraph& g) {
    auto& line = std::get<Corridor>(g.edges.at(aw()).geometry).centerline;
    line.push_back(line.back());
  });
  with("bad-point", [](ZoneGraph& g) {
    std::get<Corridor>(g.edges.at(aw()).geometry).centerline.front().z = -5;
  });
  with("bad-box", [](ZoneGraph& g) {
    auto& box = std::get<Box>(g.vertices.at(nA()).geometry);
    box.max.z = box.min.z;
  });
  with("bad-capacity", [](ZoneGraph& g) { g.vertices.at(nA()).meta.capacity = 0; });
  with("empty-allowlist", [](ZoneGraph& g) {
    g.edges.at(aw()).meta.access.is_private = true;
  });
  with("missing-endpoints", [](ZoneGraph& g) { g.edges.at(aw()).meta.from.reset(); });
  with("border-crossing-airway", [](ZoneGraph& g) {
    g.edges.at(aw()).meta.to = ElementId("B", ElementKind::Node, "nB");
  });
  with("dangling-endpoint", [](ZoneGraph& g) {
    g.edges.at(aw()).meta.to = ElementId("A", ElementKind::Intersection, "ghost");
  });
  with("self-loop", [](ZoneGraph& g) { g.edges.at(aw()).meta.from = iA(); });
  return out;
}

// valid graph whose only quirk is an intersection topping out above 152.4 m
inline ZoneGraph altitude_mutant() {
  ZoneGraph g = detail::base_zone();
  std::get<Sphere>(g.vertices.at(detail::iA()).geometry).center.z = 140;
  return g;
}

}  // namespace iod::testgen
