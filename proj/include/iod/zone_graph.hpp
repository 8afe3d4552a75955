#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "iod/element.hpp"

namespace iod {

// Maximum altitude advisory limit (meters above ground). Exceeding it is a
// validation warning, not an error.
inline constexpr double kAltitudeAdvisoryLimit = 152.4;

struct ValidationIssue {
  std::string code;
  std::string subject;  // element address or empty
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }

  void error(std::string code, std::string subject, std::string message) {
    errors.push_back({std::move(code), std::move(subject), std::move(message)});
  }
  void warn(std::string code, std::string subject, std::string message) {
    warnings.push_back({std::move(code), std::move(subject), std::move(message)});
  }
  bool has_error(const std::string& code) const {
    for (const auto& e : errors)
      if (e.code == code) return true;
    return false;
  }
  bool has_warning(const std::string& code) const {
    for (const auto& w : warnings)
      if (w.code == code) return true;
    return false;
  }
};

// Per-zone directed graph: intersections, nodes and gates as vertices, airways
// as edges. Pure map data; live occupancy lives with the ZSPs.
struct ZoneGraph {
  std::string zone;
  std::map<ElementId, Element> vertices;
  std::map<ElementId, Element> edges;

  const Element* find(const ElementId& id) const {
    if (auto it = vertices.find(id); it != vertices.end()) return &it->second;
    if (auto it = edges.find(id); it != edges.end()) return &it->second;
    return nullptr;
  }

  bool contains_element(const ElementId& id) const { return find(id) != nullptr; }

  void add(Element e) {
    if (e.id.kind == ElementKind::Airway)
      edges.emplace(e.id, std::move(e));
    else
      vertices.emplace(e.id, std::move(e));
  }

  // Outgoing airways of a vertex, in id order.
  std::vector<const Element*> out_airways(const ElementId& vertex) const {
    std::vector<const Element*> out;
    for (const auto& [id, e] : edges)
      if (e.meta.from && *e.meta.from == vertex) out.push_back(&e);
    return out;
  }

  std::vector<const Element*> gates() const {
    std::vector<const Element*> out;
    for (const auto& [id, e] : vertices)
      if (id.kind == ElementKind::Gate) out.push_back(&e);
    return out;
  }

  // zones reachable through this zone's gates, sorted
  std::vector<std::string> adjacent_zones() const {
    std::set<std::string> out;
    for (const Element* g : gates())
      for (const auto& z : g->id.zones)
        if (z != zone) out.insert(z);
    return {out.begin(), out.end()};
  }
};

namespace detail {

inline void validate_geometry(const Element& e, ValidationReport& report) {
  const std::string addr = e.id.str();
  if (!kind_matches_geometry(e.id.kind, e.geometry)) {
    report.error("kind-geometry-mismatch", addr, "geometry variant does not match element kind");
    return;
  }
  if (const auto* c = std::get_if<Corridor>(&e.geometry)) {
    if (c->radius <= 0) report.error("bad-radius", addr, "corridor radius must be positive");
    if (c->centerline.size() < 2)
      report.error("short-centerline", addr, "centerline needs at least 2 points");
    for (std::size_t i = 1; i < c->centerline.size(); ++i)
      if (c->centerline[i] == c->centerline[i - 1])
        report.error("duplicate-centerline-point", addr, "consecutive centerline points coincide");
    for (const auto& p : c->centerline)
      if (!finite(p) || p.z < 0) report.error("bad-point", addr, "non-finite or below-ground point");
  } else if (const auto* s = std::get_if<Sphere>(&e.geometry)) {
    if (s->radius <= 0) report.error("bad-radius", addr, "sphere radius must be positive");
    if (!finite(s->center) || s->center.z < 0)
      report.error("bad-point", addr, "non-finite or below-ground center");
  } else if (const auto* b = std::get_if<Box>(&e.geometry)) {
    if (!(b->min.x < b->max.x && b->min.y < b->max.y && b->min.z < b->max.z))
      report.error("bad-box", addr, "box min must be strictly below max componentwise");
    if (!finite(b->min) || !finite(b->max) || b->min.z < 0)
      report.error("bad-point", addr, "non-finite or below-ground corner");
  }
  if (top_altitude(e.geometry) > kAltitudeAdvisoryLimit)
    report.warn("altitude-advisory", addr, "geometry exceeds 152.4 m above ground");
}

inline void validate_metadata(const Element& e, ValidationReport& report) {
  const std::string addr = e.id.str();
  if (e.meta.capacity < 1) report.error("bad-capacity", addr, "capacity must be >= 1");
  if (e.meta.access.is_private && e.meta.access.allowlist.empty())
    report.error("empty-allowlist", addr, "private element needs a non-empty allowlist");
}

}  // namespace detail

// Structural validation of one zone graph. Returns a report; an empty error
// list means every invariant holds. Altitude overruns are warnings only.
inline ValidationReport validate_zone_graph(const ZoneGraph& graph) {
  ValidationReport report;
  std::set<std::string> seen;

  auto check_id = [&](const Element& e) {
    const std::string addr = e.id.str();
    if (!seen.insert(addr).second) report.error("duplicate-id", addr, "element id repeated");
    if (e.id.kind == ElementKind::Gate) {
      if (e.id.zones.size() != 2)
        report.error("gate-zone-count", addr, "gate must carry exactly two zone tokens");
    } else if (e.id.zones.size() != 1) {
      report.error("zone-count", addr, "non-gate element must carry exactly one zone token");
    }
    if (!e.id.in_zone(graph.zone))
      report.error("foreign-element", addr, "element does not belong to zone " + graph.zone);
  };

  for (const auto& [id, e] : graph.vertices) {
    check_id(e);
    if (id.kind == ElementKind::Airway)
      report.error("edge-in-vertices", id.str(), "airway stored as vertex");
    detail::validate_geometry(e, report);
    detail::validate_metadata(e, report);
  }

  for (const auto& [id, e] : graph.edges) {
    const std::string addr = id.str();
    check_id(e);
    if (id.kind != ElementKind::Airway) {
      report.error("vertex-in-edges", addr, "non-airway stored as edge");
      continue;
    }
    detail::validate_geometry(e, report);
    detail::validate_metadata(e, report);
    if (!e.meta.from || !e.meta.to) {
      report.error("missing-endpoints", addr, "airway needs from and to vertices");
      continue;
    }
    for (const ElementId* end : {&*e.meta.from, &*e.meta.to}) {
      auto it = graph.vertices.find(*end);
      if (it == graph.vertices.end()) {
        // Either dangling or crossing the border without a gate.
        if (!end->in_zone(graph.zone) && end->kind != ElementKind::Gate)
          report.error("border-crossing-airway", addr,
                       "airway crosses zone border: endpoint " + end->str() +
                           " lies outside zone " + graph.zone + " and is not a gate");
        else
          report.error("dangling-endpoint", addr, "endpoint " + end->str() + " not in zone graph");
      }
    }
    if (*e.meta.from == *e.meta.to)
      report.error("self-loop", addr, "airway from and to vertices coincide");
  }
  return report;
}

// Convenience: zones adjacent to `zone` across shared gates.
inline std::set<std::string> adjacent_zones(const ZoneGraph& graph) {
  std::set<std::string> out;
  for (const Element* g : graph.gates())
    for (const auto& z : g->id.zones)
      if (z != graph.zone) out.insert(z);
  return out;
}

}  // namespace iod
