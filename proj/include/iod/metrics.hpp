#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "iod/trace.hpp"

namespace iod {

struct DroneMetrics {
  int trips_completed = 0;
  Tick trip_time = 0;  // summed request-to-completion ticks
  int groundings = 0;  // ordered landings (mitigation directives that ground)
  int holdings = 0;    // transitions into holding (ordered or self-initiated)
  int handoffs = 0;
  int failed_handoffs = 0;
  int sos = 0;
  std::vector<Tick> denial_delays;  // one entry per pre-takeoff admission denial
};

struct OccupancyStats {
  int p50 = 0, p90 = 0, peak = 0;
};

struct MetricsSummary {
  std::map<std::string, DroneMetrics> per_drone;
  std::map<Tick, std::map<std::string, int>> messages_per_tick_zone;
  std::map<std::string, OccupancyStats> occupancy;  // element -> percentile stats
  int messages_total = 0;
  int messages_dropped = 0;

  int groundings() const {
    int n = 0;
    for (const auto& [d, m] : per_drone) n += m.groundings;
    return n;
  }
  int holdings() const {
    int n = 0;
    for (const auto& [d, m] : per_drone) n += m.holdings;
    return n;
  }
  int denials() const {
    int n = 0;
    for (const auto& [d, m] : per_drone) n += static_cast<int>(m.denial_delays.size());
    return n;
  }
  // the admission-benefit comparison metric: airborne waits are the costly
  // ones; a denial keeps the drone on the ground and is counted separately
  int wait_events() const { return groundings() + holdings(); }
  int completed_trips() const {
    int n = 0;
    for (const auto& [d, m] : per_drone) n += m.trips_completed;
    return n;
  }
};

namespace detail {

inline int percentile(std::vector<int>& sorted, double p) {
  if (sorted.empty()) return 0;
  std::size_t idx = static_cast<std::size_t>(p * (sorted.size() - 1) + 0.5);
  return sorted[std::min(idx, sorted.size() - 1)];
}

}  // namespace detail

// Pure recomputation of the summary from a trace: anyone reading the same
// file computes the same numbers the engine reports.
inline MetricsSummary stats(const std::vector<TraceEvent>& trace) {
  MetricsSummary s;
  std::map<std::string, Tick> trip_started_at;
  std::vector<std::map<std::string, int>> occ_by_tick;  // airborne occupancy snapshots

  auto need = [](const Json& payload, const char* key) -> const Json& {
    auto it = payload.find(key);
    if (it == payload.end())
      raise(Errc::MalformedTrace, std::string("event payload missing '") + key + "'");
    return *it;
  };

  for (const auto& e : trace) {
    if (e.kind == "mode") {
      if (need(e.payload, "to").get<std::string>() == "holding") ++s.per_drone[e.subject].holdings;
    } else if (e.kind == "admission") {
      if (!need(e.payload, "admit").get<bool>()) {
        std::string drone = need(e.payload, "drone").get<std::string>();
        s.per_drone[drone].denial_delays.push_back(need(e.payload, "delay").get<Tick>());
      }
    } else if (e.kind == "mitigate") {
      // a hold shows up as the drone's own holding transition; only the
      // land downgrade is a grounding
      if (need(e.payload, "cmd").get<std::string>() == "land")
        ++s.per_drone[need(e.payload, "drone").get<std::string>()].groundings;
    } else if (e.kind == "trip_started") {
      trip_started_at[e.subject] = e.tick;
    } else if (e.kind == "trip_completed") {
      DroneMetrics& m = s.per_drone[e.subject];
      ++m.trips_completed;
      auto it = trip_started_at.find(e.subject);
      if (it != trip_started_at.end()) {
        m.trip_time += e.tick - it->second;
        trip_started_at.erase(it);
      }
    } else if (e.kind == "handoff_completed") {
      ++s.per_drone[e.subject].handoffs;
    } else if (e.kind == "handoff_failed") {
      ++s.per_drone[e.subject].failed_handoffs;
    } else if (e.kind == "sos_sent") {
      ++s.per_drone[e.subject].sos;
    } else if (e.kind == "messages") {
      const Json& by_zone = need(e.payload, "by_zone");
      for (auto it = by_zone.begin(); it != by_zone.end(); ++it)
        s.messages_per_tick_zone[e.tick][it.key()] = it.value().get<int>();
      s.messages_total += need(e.payload, "total").get<int>();
      s.messages_dropped += need(e.payload, "dropped").get<int>();
    } else if (e.kind == "tick_state") {
      std::map<std::string, int> occ_now;
      for (const auto& d : need(e.payload, "drones")) {
        std::string mode = need(d, "mode").get<std::string>();
        if (mode == "airborne" || mode == "holding" || mode == "landing" || mode == "emergency")
          ++occ_now[need(d, "element").get<std::string>()];
      }
      occ_by_tick.push_back(std::move(occ_now));
    }
  }

  std::set<std::string> elements;
  for (const auto& snap : occ_by_tick)
    for (const auto& [el, n] : snap) elements.insert(el);
  for (const auto& el : elements) {
    std::vector<int> series;
    series.reserve(occ_by_tick.size());
    for (const auto& snap : occ_by_tick) {
      auto it = snap.find(el);
      series.push_back(it == snap.end() ? 0 : it->second);
    }
    std::sort(series.begin(), series.end());
    OccupancyStats o;
    o.p50 = detail::percentile(series, 0.5);
    o.p90 = detail::percentile(series, 0.9);
    o.peak = series.empty() ? 0 : series.back();
    s.occupancy[el] = o;
  }
  return s;
}

inline void write_metrics_csv(const MetricsSummary& s, std::ostream& out) {
  out << "drone,trips_completed,trip_time,groundings,holdings,handoffs,failed_handoffs,sos,"
         "denials,denial_delay_total\n";
  for (const auto& [drone, m] : s.per_drone) {
    Tick delay = 0;
    for (Tick d : m.denial_delays) delay += d;
    out << drone << ',' << m.trips_completed << ',' << m.trip_time << ',' << m.groundings << ','
        << m.holdings << ',' << m.handoffs << ',' << m.failed_handoffs << ',' << m.sos << ','
        << m.denial_delays.size() << ',' << delay << '\n';
  }
  out << "TOTAL," << s.completed_trips() << ",," << s.groundings() << ',' << s.holdings()
      << ",,,," << s.denials() << ",\n";
}

// long-format per-tick occupancy, derived from tick_state events
inline void write_occupancy_csv(const std::vector<TraceEvent>& trace, std::ostream& out) {
  out << "tick,element,occupancy\n";
  for (const auto& e : trace) {
    if (e.kind != "tick_state") continue;
    std::map<std::string, int> occ;
    auto it = e.payload.find("drones");
    if (it == e.payload.end()) continue;
    for (const auto& d : *it) {
      std::string mode = d.value("mode", std::string{});
      if (mode == "airborne" || mode == "holding" || mode == "landing" || mode == "emergency")
        ++occ[d.value("element", std::string{})];
    }
    for (const auto& [el, n] : occ) out << e.tick << ',' << el << ',' << n << '\n';
  }
}

}  // namespace iod
