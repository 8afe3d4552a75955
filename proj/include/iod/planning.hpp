#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "iod/errors.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

using Tick = std::int64_t;

struct PlanConstraints {
  PerformanceProfile profile;
  std::string requester_owner;
  double wind_speed = 0;
  std::set<ElementId> excluded;  // quarantined or otherwise closed elements
  bool use_performance = true;
  bool use_access = true;
};

// Path on the zone graph. `elements` is the interior alternating sequence of
// airways and intersections; the src and dst vertices are kept separately so
// the identity pathway (src == dst) stays representable.
struct Pathway {
  ElementId src, dst;
  std::vector<ElementId> elements;
  ElementId contingency;  // landing-capable node
  Tick planned_at = 0;
  double length_m = 0;
  double contingency_extra_m = 0;  // graph distance dst -> contingency

  bool covers(const ElementId& id) const {
    if (id == src || id == dst) return true;
    for (const auto& e : elements)
      if (e == id) return true;
    return false;
  }
};

namespace detail {

inline bool element_usable(const Element& e, const PlanConstraints& c) {
  if (c.excluded.count(e.id)) return false;
  if (c.use_performance && !meets_performance(c.profile, e, c.wind_speed)) return false;
  if (c.use_access && !e.meta.access.allows(c.requester_owner)) return false;
  return true;
}

struct Label {
  double dist = 0;
  std::vector<ElementId> path;  // interior sequence from the start
};

inline bool label_less(double da, const std::vector<ElementId>& pa, double db,
                       const std::vector<ElementId>& pb) {
  if (da != db) return da < db;
  return pa < pb;
}

// Deterministic Dijkstra over one zone graph. Vertices cost nothing, airways
// cost their centerline length; equal-cost ties resolve to the
// lexicographically smallest element-id sequence. Nodes never carry through
// traffic: expansion from a node happens only when it is the start.
inline std::map<ElementId, Label> dijkstra(const ZoneGraph& graph, const ElementId& src,
                                           const PlanConstraints& c) {
  std::map<ElementId, Label> best;

  struct QEntry {
    double dist;
    std::vector<ElementId> path;
    ElementId vertex;
    bool operator>(const QEntry& o) const {
      if (dist != o.dist) return dist > o.dist;
      if (path != o.path) return path > o.path;
      return vertex > o.vertex;
    }
  };
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue;

  auto push_start = [&](const ElementId& v, std::vector<ElementId> path0) {
    queue.push({0.0, std::move(path0), v});
  };

  if (src.kind == ElementKind::Airway) {
    auto it = graph.edges.find(src);
    if (it == graph.edges.end()) raise(Errc::UnknownElement, src.str());
    if (!it->second.meta.to) raise(Errc::UnknownElement, "airway without endpoints " + src.str());
    const ElementId entry = *it->second.meta.to;
    auto vit = graph.vertices.find(entry);
    if (vit != graph.vertices.end() && element_usable(vit->second, c))
      push_start(entry, {entry});
  } else {
    if (!graph.vertices.count(src)) raise(Errc::UnknownElement, src.str());
    push_start(src, {});
  }

  std::set<ElementId> settled;
  while (!queue.empty()) {
    QEntry top = queue.top();
    queue.pop();
    if (settled.count(top.vertex)) continue;
    settled.insert(top.vertex);
    best[top.vertex] = {top.dist, top.path};

    // Nodes are start/end only: a drone takes off from a node it starts in
    // (empty path so far) but never crosses one it arrived at.
    if (top.vertex.kind == ElementKind::Node && !top.path.empty()) continue;

    for (const Element* airway : graph.out_airways(top.vertex)) {
      if (!element_usable(*airway, c)) continue;
      const ElementId& next = *airway->meta.to;
      auto vit = graph.vertices.find(next);
      if (vit == graph.vertices.end()) continue;
      if (!element_usable(vit->second, c)) continue;
      if (settled.count(next)) continue;
      QEntry e{top.dist + airway->length(), top.path, next};
      e.path.push_back(airway->id);
      e.path.push_back(next);
      queue.push(std::move(e));
    }
  }
  return best;
}

// Distance map variant keyed for reuse; dst lookup returns nullopt when
// unreachable under the constraints.
inline std::optional<Label> route_to(const ZoneGraph& graph, const ElementId& src,
                                     const ElementId& dst, const PlanConstraints& c) {
  if (src == dst && src.kind != ElementKind::Airway) {
    auto it = graph.vertices.find(src);
    if (it == graph.vertices.end()) raise(Errc::UnknownElement, src.str());
    if (!element_usable(it->second, c)) return std::nullopt;
    return Label{0.0, {}};
  }
  auto best = dijkstra(graph, src, c);
  auto it = best.find(dst);
  if (it == best.end()) return std::nullopt;
  return it->second;
}

}  // namespace detail

// Interior element sequence and length of the minimum pathway src -> dst, or
// the reason there is none. Error discrimination runs relaxed passes: a graph
// with no unconstrained path is NoPath; otherwise whichever single filter
// blocks on its own names the error.
inline Pathway shortest_pathway(const ZoneGraph& graph, const ElementId& src, const ElementId& dst,
                                const PlanConstraints& constraints, Tick now = 0) {
  if (dst.kind == ElementKind::Airway)
    raise(Errc::UnknownElement, "pathway destination must be a vertex: " + dst.str());

  auto label = detail::route_to(graph, src, dst, constraints);
  if (!label) {
    PlanConstraints structural = constraints;
    structural.use_performance = false;
    structural.use_access = false;
    if (!detail::route_to(graph, src, dst, structural))
      raise(Errc::NoPath, src.str() + " -> " + dst.str());
    PlanConstraints perf_only = structural;
    perf_only.use_performance = true;
    if (!detail::route_to(graph, src, dst, perf_only))
      raise(Errc::PerformanceInsufficient, src.str() + " -> " + dst.str());
    raise(Errc::AccessDenied, src.str() + " -> " + dst.str());
  }

  Pathway p;
  p.src = src;
  p.dst = dst;
  p.planned_at = now;
  p.elements = label->path;
  if (!p.elements.empty() && p.elements.back() == dst) p.elements.pop_back();
  p.length_m = label->dist;
  return p;
}

// Contingency: the landing-capable node nearest to dst (remaining-path
// distance at trip end), reachable from every element of the pathway.
inline void attach_contingency(const ZoneGraph& graph, Pathway& pathway,
                               const PlanConstraints& constraints) {
  std::vector<ElementId> probes;  // every element the drone may be in
  probes.push_back(pathway.src);
  for (const auto& e : pathway.elements) probes.push_back(e);
  probes.push_back(pathway.dst);

  std::optional<ElementId> best;
  double best_dist = 0;
  auto from_dst = detail::dijkstra(graph, pathway.dst, constraints);

  for (const auto& [vid, v] : graph.vertices) {
    if (!v.landing_capable()) continue;
    if (!detail::element_usable(v, constraints)) continue;
    double dist_from_dst;
    if (vid == pathway.dst) {
      dist_from_dst = 0;
    } else {
      auto it = from_dst.find(vid);
      if (it == from_dst.end()) continue;
      dist_from_dst = it->second.dist;
    }
    bool reachable_from_all = true;
    for (const auto& probe : probes) {
      if (probe == vid) continue;
      if (!detail::route_to(graph, probe, vid, constraints)) {
        reachable_from_all = false;
        break;
      }
    }
    if (!reachable_from_all) continue;
    if (!best || dist_from_dst < best_dist || (dist_from_dst == best_dist && vid < *best)) {
      best = vid;
      best_dist = dist_from_dst;
    }
  }
  if (!best) raise(Errc::NoContingency, "no landing-capable node covers " + pathway.dst.str());
  pathway.contingency = *best;
  pathway.contingency_extra_m = best_dist;
}

// Full planning entry point: minimum pathway plus contingency.
inline Pathway plan_pathway(const ZoneGraph& graph, const ElementId& src, const ElementId& dst,
                            const PlanConstraints& constraints, Tick now = 0) {
  Pathway p = shortest_pathway(graph, src, dst, constraints, now);
  attach_contingency(graph, p, constraints);
  return p;
}

// Structural pathway check used by tests and the trace checker: adjacency via
// airway endpoints, strict airway/intersection alternation of the interior,
// interior free of nodes.
inline bool pathway_well_formed(const ZoneGraph& graph, const Pathway& p) {
  std::vector<ElementId> chain;
  chain.push_back(p.src);
  for (const auto& e : p.elements) chain.push_back(e);
  chain.push_back(p.dst);
  if (p.src == p.dst && p.elements.empty()) return graph.contains_element(p.src);

  // interior alternation and no interior nodes
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    if (chain[i].kind == ElementKind::Node) return false;
    if (i >= 2 && (chain[i].kind == ElementKind::Airway) == (chain[i - 1].kind == ElementKind::Airway))
      return false;
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const ElementId& a = chain[i];
    const ElementId& b = chain[i + 1];
    if (a.kind == ElementKind::Airway && b.kind == ElementKind::Airway) return false;
    if (a.kind == ElementKind::Airway) {
      const Element* e = graph.find(a);
      if (!e || !e->meta.to || !(*e->meta.to == b)) return false;
    } else if (b.kind == ElementKind::Airway) {
      const Element* e = graph.find(b);
      if (!e || !e->meta.from || !(*e->meta.from == a)) return false;
    } else {
      return false;  // two vertices can only meet through an airway
    }
  }
  return true;
}

}  // namespace iod
