#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "iod/trace.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

struct Violation {
  Tick tick = 0;
  std::string code, subject, detail;
};

struct CheckOptions {
  bool check_separation = false;  // strict pairwise check, fixture scenarios only
  double separation_m = 10;
};

namespace detail {

inline bool airborne_state(const std::string& m) {
  return m == "airborne" || m == "holding" || m == "landing" || m == "emergency";
}

inline bool transition_allowed(const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (b == "failed") return a != "failed";
  if (a == "grounded") return b == "airborne" || b == "landed";
  if (a == "airborne") return b == "holding" || b == "landing" || b == "emergency";
  if (a == "holding") return b == "airborne" || b == "landing" || b == "emergency";
  if (a == "landing") return b == "landed" || b == "grounded";
  if (a == "emergency") return b == "landed";
  if (a == "landed") return b == "grounded";
  return false;
}

struct DroneRow {
  std::string id, mode, element_str, zsp;
  ElementId element;
  Point pos;
  double fuel = 0;
};

inline const Element* find_in_world(const std::map<std::string, ZoneGraph>& world,
                                    const ElementId& el) {
  for (const auto& z : el.zones) {
    auto it = world.find(z);
    if (it == world.end()) continue;
    if (const Element* e = it->second.find(el)) return e;
  }
  return nullptr;
}

}  // namespace detail

// Post-run invariant sweep over the trace: authority uniqueness and
// continuity, conservation, containment, capacity, fuel monotonicity,
// and the documented mode-transition table.
inline std::vector<Violation> check_trace(const std::vector<TraceEvent>& trace,
                                          const std::map<std::string, ZoneGraph>& world,
                                          const CheckOptions& opt = {}) {
  using detail::airborne_state;
  using detail::DroneRow;
  std::vector<Violation> out;
  auto flag = [&](Tick tick, std::string code, std::string subject, std::string detail) {
    out.push_back({tick, std::move(code), std::move(subject), std::move(detail)});
  };

  std::map<std::string, DroneRow> prev;
  std::map<std::string, double> last_fuel;
  std::set<std::string> handoff_since;  // drones with a handoff event since last state

  for (const auto& e : trace) {
    if (e.kind == "handoff_completed") handoff_since.insert(e.subject);
    if (e.kind != "tick_state") continue;

    std::vector<DroneRow> rows;
    auto dit = e.payload.find("drones");
    if (dit == e.payload.end()) {
      flag(e.tick, "malformed-state", "world", "tick_state without drones");
      continue;
    }
    for (const auto& d : *dit) {
      DroneRow r;
      r.id = d.value("id", std::string{});
      r.mode = d.value("mode", std::string{});
      r.element_str = d.value("element", std::string{});
      r.zsp = d.value("zsp", std::string{});
      r.pos = {d.value("x", 0.0), d.value("y", 0.0), d.value("z", 0.0)};
      r.fuel = d.value("fuel", 0.0);
      try {
        r.element = parse_address(r.element_str);
      } catch (const Error&) {
        flag(e.tick, "bad-element", r.id, r.element_str);
        continue;
      }
      rows.push_back(std::move(r));
    }

    // conservation: every drone is in exactly one lifecycle category
    int airborne = 0, grounded = 0, landed = 0, failed = 0;
    for (const auto& r : rows) {
      if (airborne_state(r.mode))
        ++airborne;
      else if (r.mode == "grounded")
        ++grounded;
      else if (r.mode == "landed")
        ++landed;
      else if (r.mode == "failed")
        ++failed;
      else
        flag(e.tick, "unknown-mode", r.id, r.mode);
    }
    int spawned = e.payload.value("spawned", static_cast<int>(rows.size()));
    if (airborne + grounded + landed + failed != spawned)
      flag(e.tick, "conservation", "world",
           "spawned " + std::to_string(spawned) + " != categories " +
               std::to_string(airborne + grounded + landed + failed));
    for (const auto& [id, p] : prev) {
      bool present = false;
      for (const auto& r : rows)
        if (r.id == id) present = true;
      if (!present) flag(e.tick, "conservation", id, "drone disappeared from state");
    }

    std::map<ElementId, int> occ;
    for (const auto& r : rows) {
      // authority: airborne drones always have a serving zsp, which changes
      // hands only through a completed handoff
      if (airborne_state(r.mode)) {
        if (r.zsp.empty()) flag(e.tick, "authority", r.id, "airborne without serving zsp");
        auto p = prev.find(r.id);
        if (p != prev.end() && airborne_state(p->second.mode) && p->second.zsp != r.zsp &&
            !handoff_since.count(r.id))
          flag(e.tick, "authority", r.id,
               "serving zsp changed " + p->second.zsp + " -> " + r.zsp + " without handoff");
        occ[r.element]++;
      }

      // containment
      if (airborne_state(r.mode)) {
        const Element* el = detail::find_in_world(world, r.element);
        if (!el) {
          flag(e.tick, "containment", r.id, "unknown element " + r.element_str);
        } else if (!contains(el->geometry, r.pos)) {
          flag(e.tick, "containment", r.id,
               r.element_str + " does not contain position at tick " + std::to_string(e.tick));
        }
      }

      // fuel: burns monotonically in the air, resets only on the ground
      auto f = last_fuel.find(r.id);
      if (f != last_fuel.end() && airborne_state(r.mode) && r.fuel > f->second + 1e-9)
        flag(e.tick, "fuel", r.id, "fuel increased while airborne");
      last_fuel[r.id] = r.fuel;
      if (r.fuel <= 0 && (r.mode == "airborne" || r.mode == "holding"))
        flag(e.tick, "fuel", r.id, "cruising at zero fuel");

      // transition table
      auto p = prev.find(r.id);
      if (p != prev.end() && !detail::transition_allowed(p->second.mode, r.mode))
        flag(e.tick, "transition", r.id, p->second.mode + " -> " + r.mode);
    }

    // capacity
    for (const auto& [el, n] : occ) {
      const Element* def = detail::find_in_world(world, el);
      if (def && n > def->meta.capacity)
        flag(e.tick, "capacity", el.str(),
             std::to_string(n) + " > " + std::to_string(def->meta.capacity));
    }

    if (opt.check_separation) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!airborne_state(rows[i].mode) || rows[i].element.kind == ElementKind::Node) continue;
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
          if (!airborne_state(rows[j].mode) || rows[j].element.kind == ElementKind::Node) continue;
          double d = distance(rows[i].pos, rows[j].pos);
          if (d < opt.separation_m - 1e-6)
            flag(e.tick, "separation", rows[i].id + "/" + rows[j].id,
                 "pairwise distance " + std::to_string(d));
        }
      }
    }

    prev.clear();
    for (auto& r : rows) prev[r.id] = std::move(r);
    handoff_since.clear();
  }
  return out;
}

}  // namespace iod
