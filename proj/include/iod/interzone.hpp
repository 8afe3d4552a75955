#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "iod/errors.hpp"
#include "iod/planning.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

// One way of crossing a zone: enter at from_gate, leave at to_gate. Cost is
// the minimum pathway length between the gates inside `zone`.
struct Transit {
  ElementId from_gate, to_gate;
  std::string zone;
  double cost = 0;

  bool operator==(const Transit& o) const {
    return from_gate == o.from_gate && to_gate == o.to_gate && zone == o.zone && cost == o.cost;
  }
};

// ECN congestion notice. Subject is either a transit (from_gate set) or a
// single gate; a gate notice penalizes every transit arriving at that gate.
struct EcnNotice {
  std::string origin_zsp;
  std::string zone;                    // transit's zone; subject gate's first zone otherwise
  std::optional<ElementId> from_gate;  // set => transit subject
  ElementId to_gate;
  double level = 0;  // 0..1
  Tick issued_at = 0;
  Tick ttl = 30;

  bool expired(Tick now) const { return now >= issued_at + ttl; }
  bool applies(const Transit& t) const {
    if (from_gate) return t.zone == zone && *from_gate == t.from_gate && to_gate == t.to_gate;
    return to_gate == t.to_gate;
  }
};

struct InterzoneGraph {
  std::vector<ElementId> gates;   // sorted, unique
  std::vector<Transit> transits;  // sorted by (zone, from, to)

  const std::vector<std::string>& zones_of(const ElementId& gate) const {
    auto it = std::lower_bound(gates.begin(), gates.end(), gate);
    if (it == gates.end() || !(*it == gate)) raise(Errc::UnknownElement, gate.str());
    return it->zones;
  }

  std::vector<const Transit*> out_of(const ElementId& gate) const {
    std::vector<const Transit*> out;
    for (const auto& t : transits)
      if (t.from_gate == gate) out.push_back(&t);
    return out;
  }

  std::vector<ElementId> gates_of_zone(const std::string& zone) const {
    std::vector<ElementId> out;
    for (const auto& g : gates)
      if (g.in_zone(zone)) out.push_back(g);
    return out;
  }
};

// Builds the interzone graph from every ZSP's zone graph. A transit exists
// for an ordered gate pair exactly when a pathway connects the two gates
// inside the zone; its cost is that pathway's length. Zone graphs must be
// individually valid first.
inline InterzoneGraph derive_interzone(const std::map<std::string, ZoneGraph>& zones) {
  for (const auto& [name, zg] : zones) {
    auto report = validate_zone_graph(zg);
    if (!report.ok()) raise(Errc::ValidationFailed, "zone " + name + ": " + report.errors.front().message);
  }

  InterzoneGraph ig;
  std::set<ElementId> gate_set;
  for (const auto& [name, zg] : zones)
    for (const auto& g : zg.gates()) gate_set.insert(g->id);
  ig.gates.assign(gate_set.begin(), gate_set.end());

  PlanConstraints structural;  // transits are map facts, not per-drone
  structural.use_performance = false;
  structural.use_access = false;

  for (const auto& [name, zg] : zones) {
    auto gates = zg.gates();
    for (const Element* from : gates) {
      for (const Element* to : gates) {
        if (from->id == to->id) continue;
        auto label = detail::route_to(zg, from->id, to->id, structural);
        if (!label) continue;
        ig.transits.push_back({from->id, to->id, name, label->dist});
      }
    }
  }
  std::sort(ig.transits.begin(), ig.transits.end(), [](const Transit& a, const Transit& b) {
    if (a.zone != b.zone) return a.zone < b.zone;
    if (!(a.from_gate == b.from_gate)) return a.from_gate < b.from_gate;
    return a.to_gate < b.to_gate;
  });
  return ig;
}

// active ECN level for a transit: the max over unexpired applicable notices
inline double ecn_level(const std::vector<EcnNotice>& notices, const Transit& t, Tick now) {
  double level = 0;
  for (const auto& n : notices)
    if (!n.expired(now) && n.applies(t)) level = std::max(level, n.level);
  return level;
}

inline double effective_cost(const Transit& t, double level) { return t.cost * (1.0 + 2.0 * level); }

// Gate sequence an interzone trip will cross, cheapest-first under effective
// transit costs. The search runs over (gate, zone-entered) states: entering
// the destination zone ends the route, so the last gate is the one on the
// destination zone's border. A same-zone destination yields an empty route.
inline std::vector<ElementId> plan_route(const InterzoneGraph& ig, const std::string& src_zone,
                                         const std::string& dst_zone,
                                         const std::vector<EcnNotice>& notices, Tick now) {
  if (src_zone == dst_zone) return {};

  struct State {
    ElementId gate;
    std::string entered;  // zone on the far side of `gate` along this route
    bool operator<(const State& o) const {
      if (!(gate == o.gate)) return gate < o.gate;
      return entered < o.entered;
    }
  };
  struct QEntry {
    double dist;
    std::vector<ElementId> path;
    State state;
    bool operator>(const QEntry& o) const {
      if (dist != o.dist) return dist > o.dist;
      if (path != o.path) return path > o.path;
      return o.state < state;
    }
  };

  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue;
  for (const auto& g : ig.gates) {
    if (!g.in_zone(src_zone)) continue;
    for (const auto& z : g.zones) {
      if (z == src_zone) continue;
      queue.push({0.0, {g}, {g, z}});
    }
  }

  std::set<State> settled;
  while (!queue.empty()) {
    QEntry top = queue.top();
    queue.pop();
    if (settled.count(top.state)) continue;
    settled.insert(top.state);
    if (top.state.entered == dst_zone) return top.path;

    for (const Transit* t : ig.out_of(top.state.gate)) {
      if (t->zone != top.state.entered) continue;
      const ElementId& next_gate = t->to_gate;
      for (const auto& z : next_gate.zones) {
        if (z == t->zone) continue;
        State next{next_gate, z};
        if (settled.count(next)) continue;
        QEntry e{top.dist + effective_cost(*t, ecn_level(notices, *t, now)), top.path, next};
        e.path.push_back(next_gate);
        queue.push(std::move(e));
      }
    }
  }
  raise(Errc::Unreachable, src_zone + " -> " + dst_zone);
}

// First gate of the cheapest current route, or nullopt when already in the
// destination zone. Drones re-ask as ECN notices arrive, so routes adapt
// mid-trip.
inline std::optional<ElementId> next_gate(const InterzoneGraph& ig, const std::string& current_zone,
                                          const std::string& dst_zone,
                                          const std::vector<EcnNotice>& notices, Tick now) {
  auto route = plan_route(ig, current_zone, dst_zone, notices, now);
  if (route.empty()) return std::nullopt;
  return route.front();
}

}  // namespace iod
