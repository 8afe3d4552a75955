#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "iod/errors.hpp"

namespace iod {

enum class ElementKind { Airway, Intersection, Node, Gate };

inline const char* kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Airway: return "airway";
    case ElementKind::Intersection: return "intersection";
    case ElementKind::Node: return "node";
    case ElementKind::Gate: return "gate";
  }
  return "?";
}

// Global element address, rendered as `zone/kind/local`. Gates sit on a zone
// border and carry both zone tokens, rendered `zoneA+zoneB/gate/local` with
// the tokens in sorted order.
struct ElementId {
  std::vector<std::string> zones;  // 1 entry, or 2 (sorted) for gates
  ElementKind kind = ElementKind::Node;
  std::string local;

  ElementId() = default;
  ElementId(std::string zone, ElementKind k, std::string loc)
      : zones{std::move(zone)}, kind(k), local(std::move(loc)) {}
  ElementId(std::string zone_a, std::string zone_b, std::string loc)
      : zones{std::move(zone_a), std::move(zone_b)}, kind(ElementKind::Gate), local(std::move(loc)) {
    std::sort(zones.begin(), zones.end());
  }

  bool in_zone(std::string_view zone) const {
    for (const auto& z : zones)
      if (z == zone) return true;
    return false;
  }

  bool empty() const { return zones.empty() && local.empty(); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < zones.size(); ++i) {
      if (i) out += '+';
      out += zones[i];
    }
    out += '/';
    out += kind_name(kind);
    out += '/';
    out += local;
    return out;
  }

  friend bool operator==(const ElementId& a, const ElementId& b) {
    return a.kind == b.kind && a.local == b.local && a.zones == b.zones;
  }
  // Ordering by rendered form keeps every tie-break in the system stable.
  friend std::strong_ordering operator<=>(const ElementId& a, const ElementId& b) {
    return a.str() <=> b.str();
  }
};

inline std::string format_address(const ElementId& id) { return id.str(); }

namespace detail {
inline bool valid_token(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t)
    if (c == '/' || c == '+') return false;
  return true;
}
}  // namespace detail

inline ElementId parse_address(std::string_view text) {
  const auto first = text.find('/');
  const auto second = text.find('/', first == std::string_view::npos ? first : first + 1);
  if (first == std::string_view::npos || second == std::string_view::npos)
    raise(Errc::MalformedAddress, "expected zone/kind/local in '" + std::string(text) + "'");
  std::string_view zone_part = text.substr(0, first);
  std::string_view kind_part = text.substr(first + 1, second - first - 1);
  std::string_view local_part = text.substr(second + 1);

  ElementId id;
  if (kind_part == "airway") id.kind = ElementKind::Airway;
  else if (kind_part == "intersection") id.kind = ElementKind::Intersection;
  else if (kind_part == "node") id.kind = ElementKind::Node;
  else if (kind_part == "gate") id.kind = ElementKind::Gate;
  else raise(Errc::MalformedAddress, "unknown kind '" + std::string(kind_part) + "'");

  const auto plus = zone_part.find('+');
  if (plus != std::string_view::npos) {
    if (id.kind != ElementKind::Gate)
      raise(Errc::MalformedAddress, "two zone tokens on non-gate '" + std::string(text) + "'");
    std::string_view za = zone_part.substr(0, plus);
    std::string_view zb = zone_part.substr(plus + 1);
    if (!detail::valid_token(za) || !detail::valid_token(zb) || za == zb)
      raise(Errc::MalformedAddress, "bad gate zone pair in '" + std::string(text) + "'");
    id.zones = {std::string(za), std::string(zb)};
    std::sort(id.zones.begin(), id.zones.end());
  } else {
    if (id.kind == ElementKind::Gate)
      raise(Errc::MalformedAddress, "gate needs two zone tokens: '" + std::string(text) + "'");
    if (!detail::valid_token(zone_part))
      raise(Errc::MalformedAddress, "bad zone token in '" + std::string(text) + "'");
    id.zones = {std::string(zone_part)};
  }
  if (!detail::valid_token(local_part))
    raise(Errc::MalformedAddress, "bad local token in '" + std::string(text) + "'");
  id.local = std::string(local_part);
  return id;
}

}  // namespace iod
