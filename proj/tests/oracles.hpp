#pragma once

// Brute-force reference implementations for the test suite and acceptance
// harness. Each answer is recomputed by exhaustive enumeration; nothing here
// shares search code with the library planners or the reservation table.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iod/admission.hpp"
#include "iod/interzone.hpp"
#include "iod/planning.hpp"
#include "iod/zone_graph.hpp"

namespace iod::oracle {

struct PathResult {
  double dist = 0;
  std::vector<ElementId> path;  // alternating sequence after src, ends with dst
};

inline bool usable(const Element& e, const PlanConstraints& c) {
  if (c.excluded.count(e.id)) return false;
  if (c.use_performance) {
    const PerformanceProfile& need = e.meta.min_performance;
    if (need.vtol && !c.profile.vtol) return false;
    if (need.hover && !c.profile.hover) return false;
    if (need.max_speed > 0 && c.profile.max_speed < need.max_speed + c.wind_speed) return false;
  }
  if (c.use_access && e.meta.access.is_private) {
    bool listed = false;
    for (const auto& o : e.meta.access.allowlist)
      if (o == c.requester_owner) listed = true;
    if (!listed) return false;
  }
  return true;
}

namespace detail {

// every usable outgoing airway of a vertex, by scanning all edges
inline std::vector<const Element*> airways_out(const ZoneGraph& g, const ElementId& v,
                                               const PlanConstraints& c) {
  std::vector<const Element*> out;
  for (const auto& [id, e] : g.edges)
    if (e.meta.from && *e.meta.from == v && usable(e, c)) out.push_back(&e);
  return out;
}

inline void enumerate(const ZoneGraph& g, const ElementId& at, const ElementId& dst,
                      const PlanConstraints& c, bool at_is_start, std::set<ElementId>& seen,
                      std::vector<ElementId>& path, double dist,
                      std::optional<PathResult>& best) {
  if (at == dst && !path.empty()) {
    if (!best || dist < best->dist || (dist == best->dist && path < best->path))
      best = PathResult{dist, path};
    return;
  }
  if (at.kind == ElementKind::Node && !at_is_start) return;  // nodes carry no through traffic
  for (const Element* airway : airways_out(g, at, c)) {
    const ElementId& next = *airway->meta.to;
    auto vit = g.vertices.find(next);
    if (vit == g.vertices.end() || !usable(vit->second, c)) continue;
    if (seen.count(next)) continue;
    seen.insert(next);
    path.push_back(airway->id);
    path.push_back(next);
    enumerate(g, next, dst, c, false, seen, path, dist + airway->length(), best);
    path.pop_back();
    path.pop_back();
    seen.erase(next);
  }
}

}  // namespace detail

// Exhaustive minimum (cost, sequence) over all simple paths src -> dst.
// Matches the planner label shape: path is empty for the identity, otherwise
// [airway, vertex, ...] ending with dst. nullopt when no path exists.
inline std::optional<PathResult> shortest_path(const ZoneGraph& g, const ElementId& src,
                                               const ElementId& dst, const PlanConstraints& c) {
  std::optional<PathResult> best;
  std::set<ElementId> seen;
  std::vector<ElementId> path;

  if (src.kind == ElementKind::Airway) {
    auto it = g.edges.find(src);
    if (it == g.edges.end() || !it->second.meta.to) return std::nullopt;
    const ElementId entry = *it->second.meta.to;
    auto vit = g.vertices.find(entry);
    if (vit == g.vertices.end() || !usable(vit->second, c)) return std::nullopt;
    seen.insert(entry);
    path.push_back(entry);
    if (entry == dst) return PathResult{0.0, path};
    detail::enumerate(g, entry, dst, c, false, seen, path, 0.0, best);
    return best;
  }

  auto vit = g.vertices.find(src);
  if (vit == g.vertices.end() || !usable(vit->second, c)) return std::nullopt;
  if (src == dst) return PathResult{0.0, {}};
  seen.insert(src);
  detail::enumerate(g, src, dst, c, true, seen, path, 0.0, best);
  return best;
}

// plain existence check (visited-set DFS, not enumeration)
inline bool reachable(const ZoneGraph& g, const ElementId& src, const ElementId& dst,
                      const PlanConstraints& c) {
  return shortest_path(g, src, dst, c).has_value();
}

// Contingency the planner should pick: the landing-capable usable node
// reachable from every element of the pathway, nearest to dst, smallest id on
// ties. nullopt when no node qualifies.
inline std::optional<ElementId> contingency(const ZoneGraph& g, const Pathway& p,
                                            const PlanConstraints& c) {
  std::vector<ElementId> probes{p.src};
  for (const auto& e : p.elements) probes.push_back(e);
  probes.push_back(p.dst);

  std::optional<ElementId> best;
  double best_dist = 0;
  for (const auto& [vid, v] : g.vertices) {
    if (!v.landing_capable() || !usable(v, c)) continue;
    double d;
    if (vid == p.dst) {
      d = 0;
    } else {
      auto r = shortest_path(g, p.dst, vid, c);
      if (!r) continue;
      d = r->dist;
    }
    bool ok = true;
    for (const auto& probe : probes)
      if (!(probe == vid) && !reachable(g, probe, vid, c)) ok = false;
    if (!ok) continue;
    if (!best || d < best_dist || (d == best_dist && vid < *best)) {
      best = vid;
      best_dist = d;
    }
  }
  return best;
}

namespace detail {

struct RouteState {
  ElementId gate;
  std::string entered;
  bool operator<(const RouteState& o) const {
    if (!(gate == o.gate)) return gate < o.gate;
    return entered < o.entered;
  }
};

inline void enumerate_routes(const InterzoneGraph& ig, const RouteState& at,
                             const std::string& dst_zone, const std::vector<EcnNotice>& notices,
                             Tick now, std::set<RouteState>& seen, std::vector<ElementId>& path,
                             double dist, std::optional<PathResult>& best) {
  if (at.entered == dst_zone) {
    if (!best || dist < best->dist || (dist == best->dist && path < best->path))
      best = PathResult{dist, path};
    return;
  }
  for (const Transit& t : ig.transits) {
    if (!(t.from_gate == at.gate) || t.zone != at.entered) continue;
    double cost = effective_cost(t, ecn_level(notices, t, now));
    for (const auto& z : t.to_gate.zones) {
      if (z == t.zone) continue;
      RouteState next{t.to_gate, z};
      if (seen.count(next)) continue;
      seen.insert(next);
      path.push_back(t.to_gate);
      enumerate_routes(ig, next, dst_zone, notices, now, seen, path, dist + cost, best);
      path.pop_back();
      seen.erase(next);
    }
  }
}

}  // namespace detail

// Exhaustive minimum-effective-cost gate sequence between zones; empty for a
// same-zone trip, nullopt when the destination zone cannot be reached.
inline std::optional<std::vector<ElementId>> best_route(const InterzoneGraph& ig,
                                                        const std::string& src_zone,
                                                        const std::string& dst_zone,
                                                        const std::vector<EcnNotice>& notices,
                                                        Tick now) {
  if (src_zone == dst_zone) return std::vector<ElementId>{};
  std::optional<PathResult> best;
  for (const ElementId& g : ig.gates) {
    bool borders_src = false;
    for (const auto& z : g.zones) borders_src |= z == src_zone;
    if (!borders_src) continue;
    for (const auto& z : g.zones) {
      if (z == src_zone) continue;
      std::set<detail::RouteState> seen{{g, z}};
      std::vector<ElementId> path{g};
      detail::enumerate_routes(ig, {g, z}, dst_zone, notices, now, seen, path, 0.0, best);
    }
  }
  if (!best) return std::nullopt;
  return best->path;
}

// Weighted reservation load recomputed from the raw per-drone lists.
inline double load(const std::map<std::string, std::vector<Reservation>>& all,
                   const ElementId& element, Tick t, const std::string& exclude = {}) {
  double sum = 0;
  for (const auto& [drone, rs] : all)
    for (const auto& r : rs)
      if (r.element == element && r.drone_id != exclude && r.eta_lo <= t && t <= r.eta_hi)
        sum += r.weight;
  return sum;
}

// Admission decision recomputed tick by tick against a capacity map; elements
// absent from the map are skipped, mirroring the foreign-zone rule.
inline bool admits(const std::map<std::string, std::vector<Reservation>>& all,
                   const std::vector<Reservation>& candidate,
                   const std::map<ElementId, int>& capacity, Tick shift = 0) {
  for (const auto& r : candidate) {
    auto cap = capacity.find(r.element);
    if (cap == capacity.end()) continue;
    for (Tick t = r.eta_lo + shift; t <= r.eta_hi + shift; ++t)
      if (load(all, r.element, t, r.drone_id) + r.weight > cap->second + 1e-9) return false;
  }
  return true;
}

}  // namespace iod::oracle
