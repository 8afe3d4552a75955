#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iod/address.hpp"
#include "iod/geometry.hpp"

namespace iod {

// Performance characteristics of a drone, also used as a per-element floor.
struct PerformanceProfile {
  bool vtol = false;
  bool hover = false;
  double max_speed = 0;      // m/s
  double fuel_capacity = 0;  // seconds of flight
  std::string fuel_kind;     // e.g. "electric", "gas"
  double weight_kg = 0;
};

// Componentwise dominance: required booleans must be present, numeric floors
// must be met (boundary inclusive). wind_speed raises the effective max_speed
// floor so headwind-degraded drones are filtered out at planning time.
inline bool meets_performance(const PerformanceProfile& profile, const PerformanceProfile& floor,
                              double wind_speed = 0) {
  if (floor.vtol && !profile.vtol) return false;
  if (floor.hover && !profile.hover) return false;
  if (floor.max_speed > 0 && profile.max_speed < floor.max_speed + wind_speed) return false;
  return true;
}

struct Access {
  bool is_private = false;
  std::vector<std::string> allowlist;  // owner identifiers; non-empty when private

  bool allows(const std::string& owner) const {
    if (!is_private) return true;
    for (const auto& o : allowlist)
      if (o == owner) return true;
    return false;
  }
};

struct Metadata {
  int capacity = 1;  // max drones simultaneously inside
  PerformanceProfile min_performance;
  Access access;
  std::map<std::string, std::string> components;
  // For airways: the vertices this edge runs between.
  std::optional<ElementId> from, to;

  std::optional<std::string> component(const std::string& key) const {
    auto it = components.find(key);
    if (it == components.end()) return std::nullopt;
    return it->second;
  }

  // Per-element speed policy, absent means unrestricted.
  std::optional<double> speed_limit() const {
    if (auto v = component("speed_limit")) return std::stod(*v);
    return std::nullopt;
  }
};

struct Element {
  ElementId id;
  Geometry geometry;
  Metadata meta;

  bool is_vertex() const { return id.kind != ElementKind::Airway; }

  double length() const {
    if (const auto* c = std::get_if<Corridor>(&geometry)) return polyline_length(c->centerline);
    return 0;  // vertices contribute no path length
  }

  // Nodes are landing-capable unless explicitly marked otherwise.
  bool landing_capable() const {
    if (id.kind != ElementKind::Node) return false;
    if (auto v = meta.component("landing")) return *v != "false";
    return true;
  }

  std::optional<std::string> fuel_kind() const { return meta.component("fuel_kind"); }
};

inline bool meets_performance(const PerformanceProfile& profile, const Element& element,
                              double wind_speed = 0) {
  return meets_performance(profile, element.meta.min_performance, wind_speed);
}

inline bool kind_matches_geometry(ElementKind kind, const Geometry& g) {
  switch (kind) {
    case ElementKind::Airway: return std::holds_alternative<Corridor>(g);
    case ElementKind::Node: return std::holds_alternative<Box>(g);
    case ElementKind::Intersection:
    case ElementKind::Gate: return std::holds_alternative<Sphere>(g);
  }
  return false;
}

// Capacity defaults when the scenario does not override: one drone per 50 m
// of airway, 2 per intersection or gate, 16 per node.
inline int default_capacity(ElementKind kind, double airway_length = 0) {
  switch (kind) {
    case ElementKind::Airway:
      return std::max(1, static_cast<int>(std::floor(airway_length / 50.0)));
    case ElementKind::Intersection:
    case ElementKind::Gate: return 2;
    case ElementKind::Node: return 16;
  }
  return 1;
}

}  // namespace iod
