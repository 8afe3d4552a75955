#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iod/drone.hpp"
#include "iod/errors.hpp"
#include "iod/messages.hpp"
#include "iod/weather.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

struct ZspSpec {
  std::string zsp_id, zone, owner;
};

struct TripSpec {
  std::string drone;
  ElementId dst;
  Tick request_tick = 0;
};

struct TaskSpec {
  std::string task_id, zone;
  ElementId pickup, dropoff;
  Tick post_tick = 0;
};

struct SimParams {
  std::uint64_t seed = 0;
  Tick ticks = 200;
  double loss_prob = 0;
  bool admission = true;
  double tick_seconds = 1;
};

struct Scenario {
  std::vector<std::string> zones;
  std::map<std::string, ZoneGraph> world;
  std::vector<ZspSpec> zsps;
  std::map<std::string, std::vector<std::string>> roster;  // zone -> sorted zsp ids
  std::vector<DroneConfig> drones;                         // sorted by id
  std::vector<TripSpec> trips;                             // sorted by (tick, drone)
  WeatherTimeline weather;
  std::vector<TaskSpec> tasks;  // optional demo section
  SimParams sim;
  ValidationReport report;  // retained warnings from zone validation
};

namespace detail {

[[noreturn]] inline void bad(const std::string& what) { raise(Errc::ParseError, what); }

inline const Json& need(const Json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(where) + ": missing '" + key + "'");
  return *it;
}

inline Point point_of(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    bad(std::string(where) + ": expected [x,y,z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline PerformanceProfile profile_of(const Json& j, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected profile object");
  PerformanceProfile p;
  p.vtol = j.value("vtol", false);
  p.hover = j.value("hover", false);
  p.max_speed = j.value("max_speed", 0.0);
  p.fuel_capacity = j.value("fuel_capacity", 0.0);
  p.fuel_kind = j.value("fuel_kind", std::string{});
  p.weight_kg = j.value("weight_kg", 0.0);
  return p;
}

inline Geometry geometry_of(const Json& j, const std::string& id) {
  const char* where = id.c_str();
  if (j.contains("corridor")) {
    const Json& c = j["corridor"];
    Corridor g;
    for (const auto& p : need(c, "centerline", where)) g.centerline.push_back(point_of(p, where));
    g.radius = need(c, "radius", where).get<double>();
    return g;
  }
  if (j.contains("sphere")) {
    const Json& s = j["sphere"];
    return Sphere{point_of(need(s, "center", where), where), need(s, "radius", where).get<double>()};
  }
  if (j.contains("box")) {
    const Json& b = j["box"];
    return Box{point_of(need(b, "min", where), where), point_of(need(b, "max", where), where)};
  }
  bad(id + ": expected one of corridor/sphere/box");
}

inline Element element_of(const Json& j) {
  if (!j.is_object()) bad("elements: expected object entries");
  std::string id_str = need(j, "id", "element").get<std::string>();
  Element e;
  e.id = parse_address(id_str);
  e.geometry = geometry_of(j, id_str);
  if (j.contains("capacity"))
    e.meta.capacity = j["capacity"].get<int>();
  else
    e.meta.capacity = default_capacity(e.id.kind, e.length());
  if (j.contains("min_performance"))
    e.meta.min_performance = profile_of(j["min_performance"], id_str.c_str());
  e.meta.access.is_private = j.value("private", false);
  if (j.contains("allow"))
    for (const auto& o : j["allow"]) e.meta.access.allowlist.push_back(o.get<std::string>());
  if (j.contains("components"))
    for (auto it = j["components"].begin(); it != j["components"].end(); ++it)
      e.meta.components[it.key()] = it.value().get<std::string>();
  if (j.contains("fuel")) e.meta.components["fuel_kind"] = j["fuel"].get<std::string>();
  if (j.contains("landing")) e.meta.components["landing"] = j["landing"].get<bool>() ? "true" : "false";
  if (j.contains("speed_limit")) {
    std::ostringstream os;
    os << j["speed_limit"].get<double>();
    e.meta.components["speed_limit"] = os.str();
  }
  if (j.contains("from")) e.meta.from = parse_address(j["from"].get<std::string>());
  if (j.contains("to")) e.meta.to = parse_address(j["to"].get<std::string>());
  return e;
}

// parking columns: 8x8 grid, 10 m pitch, centered in the node footprint
inline Point ground_slot(int index) {
  int s = index % 64;
  return {static_cast<double>(s % 8) * 10.0 - 35.0, static_cast<double>(s / 8) * 10.0 - 35.0, 0};
}

}  // namespace detail

inline Scenario parse_scenario(const Json& j) {
  using detail::bad;
  using detail::need;
  if (!j.is_object()) bad("scenario: expected a JSON object");
  Scenario sc;

  const Json& sim = need(j, "sim", "scenario");
  if (!sim.contains("seed")) bad("seed required");
  sc.sim.seed = sim["seed"].get<std::uint64_t>();
  sc.sim.ticks = sim.value("ticks", Tick{200});
  sc.sim.loss_prob = sim.value("loss_prob", 0.0);
  sc.sim.admission = sim.value("admission", true);
  sc.sim.tick_seconds = sim.value("tick_seconds", 1.0);
  if (sc.sim.loss_prob < 0 || sc.sim.loss_prob >= 1) bad("sim.loss_prob must be in [0,1)");
  if (sc.sim.ticks < 1) bad("sim.ticks must be >= 1");

  for (const auto& z : need(j, "zones", "scenario")) {
    std::string zone = z.get<std::string>();
    if (sc.world.count(zone)) bad("duplicate zone " + zone);
    sc.zones.push_back(zone);
    sc.world[zone].zone = zone;
  }
  if (sc.zones.empty()) bad("zones: at least one zone required");
  std::sort(sc.zones.begin(), sc.zones.end());

  for (const auto& ej : need(j, "elements", "scenario")) {
    Element e = detail::element_of(ej);
    for (const auto& zone : e.id.zones) {
      auto it = sc.world.find(zone);
      if (it == sc.world.end()) bad(e.id.str() + ": zone " + zone + " not declared");
      it->second.add(e);
    }
  }

  ValidationReport all;
  for (const auto& [zone, graph] : sc.world) {
    ValidationReport r = validate_zone_graph(graph);
    for (auto& i : r.errors) all.errors.push_back(std::move(i));
    for (auto& i : r.warnings) all.warnings.push_back(std::move(i));
  }
  sc.report = all;
  if (!all.ok()) {
    std::string msg = "scenario validation failed:";
    for (const auto& i : all.errors)
      msg += "\n  [" + i.code + "] " + i.subject + ": " + i.message;
    raise(Errc::ValidationFailed, msg);
  }

  std::set<std::string> zsp_ids;
  for (const auto& zj : need(j, "zsps", "scenario")) {
    ZspSpec s;
    s.zsp_id = need(zj, "id", "zsp").get<std::string>();
    s.zone = need(zj, "zone", "zsp").get<std::string>();
    s.owner = zj.value("owner", std::string{"iodsp"});
    if (!sc.world.count(s.zone)) bad("zsp " + s.zsp_id + ": unknown zone " + s.zone);
    if (!zsp_ids.insert(s.zsp_id).second) bad("duplicate zsp id " + s.zsp_id);
    sc.zsps.push_back(s);
    sc.roster[s.zone].push_back(s.zsp_id);
  }
  for (auto& [zone, ids] : sc.roster) std::sort(ids.begin(), ids.end());
  for (const auto& zone : sc.zones)
    if (!sc.roster.count(zone)) bad("zone " + zone + " has no zsp");
  std::sort(sc.zsps.begin(), sc.zsps.end(),
            [](const ZspSpec& a, const ZspSpec& b) { return a.zsp_id < b.zsp_id; });

  std::set<std::string> drone_ids;
  for (const auto& dj : need(j, "drones", "scenario")) {
    DroneConfig d;
    d.drone_id = need(dj, "id", "drone").get<std::string>();
    d.owner = dj.value("owner", std::string{"iodsp"});
    d.spawn_node = parse_address(need(dj, "spawn", "drone").get<std::string>());
    d.spawn_tick = dj.value("spawn_tick", Tick{0});
    if (dj.contains("fail_at")) d.fail_at = dj["fail_at"].get<Tick>();
    d.claim_tasks = dj.value("claim_tasks", false);
    d.profile = dj.contains("profile") ? detail::profile_of(dj["profile"], d.drone_id.c_str())
                                       : PerformanceProfile{true, true, 10, 600, "battery", 5};
    if (d.spawn_node.kind != ElementKind::Node)
      bad("drone " + d.drone_id + ": spawn must be a node");
    auto wit = sc.world.find(d.spawn_node.zones.front());
    if (wit == sc.world.end() || !wit->second.find(d.spawn_node))
      bad("drone " + d.drone_id + ": unknown spawn " + d.spawn_node.str());
    if (!drone_ids.insert(d.drone_id).second) bad("duplicate drone id " + d.drone_id);
    sc.drones.push_back(std::move(d));
  }
  std::sort(sc.drones.begin(), sc.drones.end(),
            [](const DroneConfig& a, const DroneConfig& b) { return a.drone_id < b.drone_id; });
  std::map<std::string, int> per_node;
  for (auto& d : sc.drones) d.ground_slot = detail::ground_slot(per_node[d.spawn_node.str()]++);

  if (j.contains("trips"))
    for (const auto& tj : j["trips"]) {
      TripSpec t;
      t.drone = need(tj, "drone", "trip").get<std::string>();
      t.dst = parse_address(need(tj, "dst", "trip").get<std::string>());
      t.request_tick = tj.value("request_tick", Tick{0});
      if (!drone_ids.count(t.drone)) bad("trip: unknown drone " + t.drone);
      if (t.dst.kind != ElementKind::Node) bad("trip for " + t.drone + ": dst must be a node");
      auto wit = sc.world.find(t.dst.zones.front());
      if (wit == sc.world.end() || !wit->second.find(t.dst))
        bad("trip for " + t.drone + ": unknown dst " + t.dst.str());
      sc.trips.push_back(std::move(t));
    }
  std::stable_sort(sc.trips.begin(), sc.trips.end(), [](const TripSpec& a, const TripSpec& b) {
    return a.request_tick != b.request_tick ? a.request_tick < b.request_tick : a.drone < b.drone;
  });

  if (j.contains("weather"))
    for (const auto& wj : j["weather"]) {
      WeatherPhase p;
      p.zone = need(wj, "zone", "weather").get<std::string>();
      p.from = wj.value("from", Tick{0});
      p.to = need(wj, "to", "weather").get<Tick>();
      p.wind = detail::point_of(need(wj, "wind", "weather"), "weather.wind");
      p.temperature = wj.value("temperature", 20.0);
      if (!sc.world.count(p.zone)) bad("weather: unknown zone " + p.zone);
      sc.weather.phases.push_back(std::move(p));
    }

  if (j.contains("tasks"))
    for (const auto& tj : j["tasks"]) {
      TaskSpec t;
      t.task_id = need(tj, "task_id", "task").get<std::string>();
      t.zone = need(tj, "zone", "task").get<std::string>();
      t.pickup = parse_address(need(tj, "pickup", "task").get<std::string>());
      t.dropoff = parse_address(need(tj, "dropoff", "task").get<std::string>());
      t.post_tick = tj.value("post_tick", Tick{0});
      if (!sc.world.count(t.zone)) bad("task " + t.task_id + ": unknown zone " + t.zone);
      sc.tasks.push_back(std::move(t));
    }

  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::ParseError, "cannot open scenario file " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    raise(Errc::ParseError, std::string("scenario JSON: ") + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(Errc::ParseError, std::string("scenario: ") + e.what());
  }
}

}  // namespace iod
