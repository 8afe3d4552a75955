#pragma once

// Seeded generator of small random two-zone worlds for oracle-equivalence
// testing. Graphs stay sparse (spanning chain plus a few extra airways) so
// exhaustive path enumeration over them is cheap, and they are valid by
// construction; callers should still assert validate_zone_graph agrees.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "iod/fixtures.hpp"
#include "iod/rng.hpp"
#include "iod/zone_graph.hpp"

namespace iod::testgen {

// Some airways and intersections carry floors or allowlists so the planners'
// filtering paths get exercised; a querying profile slower than this speed
// (or a different owner) will see them pruned.
inline constexpr double kFloorSpeed = 12;
inline constexpr const char* kPrivateOwner = "owner-locked";

namespace detail {

inline void maybe_restrict(Element& e, Rng& rng) {
  if (rng.bernoulli(0.15)) e.meta.min_performance.max_speed = kFloorSpeed;
  if (rng.bernoulli(0.10)) {
    e.meta.access.is_private = true;
    e.meta.access.allowlist = {kPrivateOwner};
  }
}

inline ZoneGraph make_zone(const std::string& zone, double x0, Rng& rng,
                           const std::vector<Element>& gates) {
  ZoneGraph zg;
  zg.zone = zone;
  const double z = fixtures::kAltitude;

  std::vector<Point> cells;
  for (int col = 0; col < 4; ++col)
    for (int row = 0; row < 4; ++row) cells.push_back({x0 + col * 200.0, row * 200.0, z});
  for (std::size_t i = cells.size(); i > 1; --i)
    std::swap(cells[i - 1], cells[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(i) - 1))]);

  const int n_int = static_cast<int>(rng.next_int(2, 8));
  const int n_node = static_cast<int>(rng.next_int(1, 2));
  std::size_t cell = 0;

  std::vector<ElementId> ints;
  for (int i = 0; i < n_int; ++i) {
    Element e = fixtures::intersection(zone, "i" + std::to_string(i), cells[cell++]);
    if (rng.bernoulli(0.10)) e.meta.min_performance.max_speed = kFloorSpeed;
    ints.push_back(e.id);
    zg.add(e);
  }
  std::vector<ElementId> nodes;
  for (int i = 0; i < n_node; ++i) {
    Element e = fixtures::node(zone, "n" + std::to_string(i), cells[cell++]);
    nodes.push_back(e.id);
    zg.add(e);
  }
  for (const Element& g : gates) zg.add(g);

  auto link = [&](const ElementId& a, const ElementId& b) {
    auto pair = fixtures::airway_pair(zone, a, b, {center_of(zg.find(a)->geometry),
                                                   center_of(zg.find(b)->geometry)});
    maybe_restrict(pair.first, rng);
    maybe_restrict(pair.second, rng);
    fixtures::add_pair(zg, std::move(pair));
  };

  for (int i = 1; i < n_int; ++i) link(ints[i], ints[static_cast<std::size_t>(rng.next_int(0, i - 1))]);
  for (const auto& n : nodes) link(n, ints[static_cast<std::size_t>(rng.next_int(0, n_int - 1))]);
  for (const Element& g : gates) link(g.id, ints[static_cast<std::size_t>(rng.next_int(0, n_int - 1))]);

  // a few one-way extras between distinct intersections
  const int extras = static_cast<int>(rng.next_int(0, 2));
  for (int i = 0; i < extras && n_int >= 2; ++i) {
    const ElementId& u = ints[static_cast<std::size_t>(rng.next_int(0, n_int - 1))];
    const ElementId& v = ints[static_cast<std::size_t>(rng.next_int(0, n_int - 1))];
    if (u == v) continue;
    ElementId probe(zone, ElementKind::Airway, u.local + "-" + v.local);
    if (zg.edges.count(probe)) continue;
    Element fwd = fixtures::airway_pair(zone, u, v, {center_of(zg.find(u)->geometry),
                                                     center_of(zg.find(v)->geometry)})
                      .first;
    maybe_restrict(fwd, rng);
    zg.add(fwd);
  }
  return zg;
}

}  // namespace detail

// Two zones A and B joined by one or two gates. Each zone graph has at most
// 12 vertices. The same seed always yields the same world.
inline std::map<std::string, ZoneGraph> random_world(std::uint64_t seed) {
  Rng rng(seed);
  const double z = fixtures::kAltitude;

  const int n_gates = static_cast<int>(rng.next_int(1, 2));
  std::vector<Element> gates;
  for (int i = 0; i < n_gates; ++i)
    gates.push_back(fixtures::gate("A", "B", "g" + std::to_string(i), {1000, i * 200.0, z}));

  ZoneGraph a = detail::make_zone("A", 0, rng, gates);
  ZoneGraph b = detail::make_zone("B", 2000, rng, gates);
  return {{"A", std::move(a)}, {"B", std::move(b)}};
}

// profile slower than kFloorSpeed so restricted elements really filter
inline PerformanceProfile query_profile() { return fixtures::default_profile(); }

}  // namespace iod::testgen
