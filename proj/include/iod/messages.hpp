#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iod/admission.hpp"
#include "iod/flight_plan.hpp"
#include "iod/interzone.hpp"
#include "iod/weather.hpp"

namespace iod {

using Json = nlohmann::ordered_json;

// drone lifecycle modes that count as "in the air" for occupancy and tracking
inline bool airborne_mode(const std::string& m) {
  return m == "airborne" || m == "holding" || m == "landing" || m == "emergency";
}

inline Json to_json(const Point& p) { return Json::array({p.x, p.y, p.z}); }

inline Json to_json(const std::vector<ElementId>& ids) {
  Json a = Json::array();
  for (const auto& id : ids) a.push_back(id.str());
  return a;
}

inline Json to_json(const Pathway& p) {
  Json j;
  j["src"] = p.src.str();
  j["dst"] = p.dst.str();
  j["elements"] = to_json(p.elements);
  j["contingency"] = p.contingency.local.empty() ? "" : p.contingency.str();
  j["length_m"] = p.length_m;
  return j;
}

// ---- Airspace layer ----

struct PositionBroadcast {
  static constexpr const char* kind = "position_broadcast";
  std::string drone_id;
  Point position;
  ElementId element;
  double progress = 0;
  std::vector<Point> future;  // next 5 ticks of predicted waypoints
  std::string mode = "airborne";
  std::string serving_zsp;
  Tick admitted_at = -1;
  Tick tick = 0;
};

struct PreciseControl {
  static constexpr const char* kind = "precise_control";
  enum class Cmd { Hold, MoveTo, Land, Resume };
  std::string drone_id;
  Cmd cmd = Cmd::Hold;
  std::optional<ElementId> target_element;
  std::optional<Point> target_point;
};

inline const char* cmd_name(PreciseControl::Cmd c) {
  switch (c) {
    case PreciseControl::Cmd::Hold: return "hold";
    case PreciseControl::Cmd::MoveTo: return "move_to";
    case PreciseControl::Cmd::Land: return "land";
    case PreciseControl::Cmd::Resume: return "resume";
  }
  return "?";
}

struct WeatherQuery {
  static constexpr const char* kind = "weather_query";
  std::string requester;
};

// weather.hpp's WeatherReport doubles as the reply message
// ---- N2N layer ----

struct N2NBroadcast {
  static constexpr const char* kind = "n2n_broadcast";
  std::string drone_id;
  ElementId element;
  double progress = 0;
  double fuel_remaining = 0;
  std::string mode;
  std::vector<ElementId> future_path;
  std::string serving_zsp;
  Tick admitted_at = -1;
  Tick tick = 0;
};

struct PathwayRequest {
  static constexpr const char* kind = "pathway_request";
  std::string drone_id;
  ElementId src, dst;  // dst may lie in another zone: partial pathway reply
  PerformanceProfile profile;
  std::string owner;
};

struct PathwayResponse {
  static constexpr const char* kind = "pathway_response";
  std::string drone_id;
  bool ok = false;
  std::string error;
  Pathway pathway;
  bool partial = false;  // pathway ends at a border gate, not the final dst
};

struct TrajectoryRequest {
  static constexpr const char* kind = "trajectory_request";
  std::string drone_id;
  ElementId element;
};

struct TrajectoryResponse {
  static constexpr const char* kind = "trajectory_response";
  std::string drone_id;
  bool ok = false;
  std::string error;
  Trajectory trajectory;
};

struct RefuelRequest {
  static constexpr const char* kind = "refuel_request";
  std::string drone_id;
  double fuel_remaining = 0;
};

struct RefuelResponse {
  static constexpr const char* kind = "refuel_response";
  std::string drone_id;
  bool ok = false;
  std::string error;
  Pathway pathway;  // to the chosen compatible fuel station
};

struct Sos {
  static constexpr const char* kind = "sos";
  std::string drone_id;
  ElementId element;
  Point position;
  std::string reason;
};

struct CongestionQuery {
  static constexpr const char* kind = "congestion_query";
  std::string requester;
  ElementId src, dst;
};

struct CongestionReport {
  static constexpr const char* kind = "congestion_report";
  std::string zone;
  ElementId src, dst;
  std::vector<std::pair<ElementId, double>> ratios;  // per element on best pathway
  double aggregate = 0;                              // max of ratios
  bool ok = true;
  std::string error;
};

// ---- E2E layer ----

struct TrackSnapshot {
  ElementId element;
  double progress = 0;
  Point position;
  double fuel_remaining = 0;
  std::vector<ElementId> route_remaining;  // gate chain ahead
  ElementId trip_dst;
  Tick admitted_at = -1;
};

struct HandoffRequest {
  static constexpr const char* kind = "handoff_request";
  std::string drone_id, from_zsp;
  ElementId gate;
  TrackSnapshot snapshot;
  PerformanceProfile profile;
  std::string owner;
};

struct HandoffAccept {
  static constexpr const char* kind = "handoff_accept";
  std::string drone_id, to_zsp;
  ElementId gate;
};

struct HandoffComplete {
  static constexpr const char* kind = "handoff_complete";
  std::string drone_id, from_zsp, to_zsp;
  ElementId gate;
};

struct ZspAdvertisement {
  static constexpr const char* kind = "zsp_advertisement";
  std::string zsp_id, zone;
  double congestion = 0;  // zone aggregate, 0..1
  Tick tick = 0;
};

// EcnNotice (interzone.hpp) is the remaining E2E message
// ---- admission control ----

struct AdmissionRequest {
  static constexpr const char* kind = "admission_request";
  std::string drone_id;
  Pathway pathway;
  std::vector<ElementId> route;  // gates ahead, for the next-zone horizon
  ElementId final_dst;           // trip destination (may lie beyond this zone)
  Tick start_tick = 0;
  PerformanceProfile profile;
};

struct AdmissionDecision {
  static constexpr const char* kind = "admission_decision";
  std::string drone_id;
  bool admit = false;
  Tick delay = 0;       // ground delay when denied
  Tick start_tick = 0;  // granted start
};

// Compact itinerary the serving ZSP shares with next-zone ZSPs; the
// recipient expands it over its own map into weighted reservations.
struct ShadowReserve {
  static constexpr const char* kind = "shadow_reserve";
  std::string drone_id, origin_zsp, owner;
  ElementId entry_gate;
  Tick entry_eta = 0;
  ElementId next_dst;        // target inside the recipient's zone
  double entry_weight = 1;   // decayed weight at the gate
  PerformanceProfile profile;
  bool release = false;      // true: drop all reservations for this drone
};

// ---- service layer ----

struct ZonePublish {
  static constexpr const char* kind = "zone_publish";
  std::string msg_id, zone, publisher;
  std::vector<std::uint8_t> payload;  // opaque, never inspected
  Tick published_at = 0;
  Tick ttl = 1;
};

struct ZoneDeliver {
  static constexpr const char* kind = "zone_deliver";
  std::string msg_id, zone, drone_id;
  std::vector<std::uint8_t> payload;
};

struct TaskPost {
  static constexpr const char* kind = "task_post";
  std::string task_id, zone;
  ElementId pickup, dropoff;
  Tick posted_at = 0;
};

struct TaskClaim {
  static constexpr const char* kind = "task_claim";
  std::string task_id, drone_id;
};

struct TaskClaimResult {
  static constexpr const char* kind = "task_claim_result";
  std::string task_id, drone_id;
  bool ok = false;
  std::string error;
  ElementId pickup, dropoff;  // filled on success so the winner can plan
};

using Message =
    std::variant<PositionBroadcast, PreciseControl, WeatherQuery, WeatherReport, N2NBroadcast,
                 PathwayRequest, PathwayResponse, TrajectoryRequest, TrajectoryResponse,
                 RefuelRequest, RefuelResponse, Sos, CongestionQuery, CongestionReport,
                 HandoffRequest, HandoffAccept, HandoffComplete, ZspAdvertisement, EcnNotice,
                 AdmissionRequest, AdmissionDecision, ShadowReserve, ZonePublish, ZoneDeliver,
                 TaskPost, TaskClaim, TaskClaimResult>;

inline const char* message_kind(const Message& m) {
  return std::visit(
      [](const auto& v) -> const char* {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeatherReport>)
          return "weather_report";
        else if constexpr (std::is_same_v<T, EcnNotice>)
          return "ecn_notice";
        else
          return T::kind;
      },
      m);
}

// compact structured record of a message for the trace
inline Json message_summary(const Message& m) {
  Json j;
  j["kind"] = message_kind(m);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PositionBroadcast>) {
          j["drone"] = v.drone_id;
          j["element"] = v.element.str();
        } else if constexpr (std::is_same_v<T, N2NBroadcast>) {
          j["drone"] = v.drone_id;
          j["element"] = v.element.str();
          j["mode"] = v.mode;
          j["fuel"] = v.fuel_remaining;
        } else if constexpr (std::is_same_v<T, PathwayRequest>) {
          j["drone"] = v.drone_id;
          j["src"] = v.src.str();
          j["dst"] = v.dst.str();
        } else if constexpr (std::is_same_v<T, PathwayResponse>) {
          j["drone"] = v.drone_id;
          j["ok"] = v.ok;
          if (!v.ok) j["error"] = v.error;
          if (v.ok) j["pathway"] = to_json(v.pathway);
          if (v.partial) j["partial"] = true;
        } else if constexpr (std::is_same_v<T, TrajectoryRequest>) {
          j["drone"] = v.drone_id;
          j["element"] = v.element.str();
        } else if constexpr (std::is_same_v<T, TrajectoryResponse>) {
          j["drone"] = v.drone_id;
          j["ok"] = v.ok;
          if (!v.ok) j["error"] = v.error;
          if (v.ok) {
            j["element"] = v.trajectory.element.str();
            j["waypoints"] = v.trajectory.waypoints.size();
          }
        } else if constexpr (std::is_same_v<T, RefuelRequest>) {
          j["drone"] = v.drone_id;
          j["fuel"] = v.fuel_remaining;
        } else if constexpr (std::is_same_v<T, RefuelResponse>) {
          j["drone"] = v.drone_id;
          j["ok"] = v.ok;
          if (v.ok) j["station"] = v.pathway.dst.str();
          if (!v.ok) j["error"] = v.error;
        } else if constexpr (std::is_same_v<T, PreciseControl>) {
          j["drone"] = v.drone_id;
          j["cmd"] = cmd_name(v.cmd);
          if (v.target_element) j["target"] = v.target_element->str();
        } else if constexpr (std::is_same_v<T, Sos>) {
          j["drone"] = v.drone_id;
          j["element"] = v.element.str();
          j["reason"] = v.reason;
        } else if constexpr (std::is_same_v<T, CongestionQuery>) {
          j["src"] = v.src.str();
          j["dst"] = v.dst.str();
        } else if constexpr (std::is_same_v<T, CongestionReport>) {
          j["zone"] = v.zone;
          j["aggregate"] = v.aggregate;
        } else if constexpr (std::is_same_v<T, WeatherQuery>) {
          j["requester"] = v.requester;
        } else if constexpr (std::is_same_v<T, WeatherReport>) {
          j["zone"] = v.zone;
          j["wind"] = to_json(v.wind);
          j["temperature"] = v.temperature;
        } else if constexpr (std::is_same_v<T, HandoffRequest>) {
          j["drone"] = v.drone_id;
          j["from_zsp"] = v.from_zsp;
          j["gate"] = v.gate.str();
        } else if constexpr (std::is_same_v<T, HandoffAccept>) {
          j["drone"] = v.drone_id;
          j["to_zsp"] = v.to_zsp;
          j["gate"] = v.gate.str();
        } else if constexpr (std::is_same_v<T, HandoffComplete>) {
          j["drone"] = v.drone_id;
          j["from_zsp"] = v.from_zsp;
          j["to_zsp"] = v.to_zsp;
          j["gate"] = v.gate.str();
        } else if constexpr (std::is_same_v<T, ZspAdvertisement>) {
          j["zsp"] = v.zsp_id;
          j["zone"] = v.zone;
          j["congestion"] = v.congestion;
        } else if constexpr (std::is_same_v<T, EcnNotice>) {
          j["origin"] = v.origin_zsp;
          j["zone"] = v.zone;
          if (v.from_gate) j["from_gate"] = v.from_gate->str();
          j["to_gate"] = v.to_gate.str();
          j["level"] = v.level;
          j["ttl"] = v.ttl;
        } else if constexpr (std::is_same_v<T, AdmissionRequest>) {
          j["drone"] = v.drone_id;
          j["start_tick"] = v.start_tick;
          j["dst"] = v.pathway.dst.str();
        } else if constexpr (std::is_same_v<T, AdmissionDecision>) {
          j["drone"] = v.drone_id;
          j["admit"] = v.admit;
          if (!v.admit) j["delay"] = v.delay;
          if (v.admit) j["start_tick"] = v.start_tick;
        } else if constexpr (std::is_same_v<T, ShadowReserve>) {
          j["drone"] = v.drone_id;
          j["origin"] = v.origin_zsp;
          if (v.release) {
            j["release"] = true;
          } else {
            j["entry_gate"] = v.entry_gate.str();
            j["entry_eta"] = v.entry_eta;
            j["weight"] = v.entry_weight;
          }
        } else if constexpr (std::is_same_v<T, ZonePublish>) {
          j["msg_id"] = v.msg_id;
          j["zone"] = v.zone;
          j["ttl"] = v.ttl;
          j["bytes"] = v.payload.size();
        } else if constexpr (std::is_same_v<T, ZoneDeliver>) {
          j["msg_id"] = v.msg_id;
          j["drone"] = v.drone_id;
          j["bytes"] = v.payload.size();
        } else if constexpr (std::is_same_v<T, TaskPost>) {
          j["task"] = v.task_id;
          j["zone"] = v.zone;
          j["pickup"] = v.pickup.str();
          j["dropoff"] = v.dropoff.str();
        } else if constexpr (std::is_same_v<T, TaskClaim>) {
          j["task"] = v.task_id;
          j["drone"] = v.drone_id;
        } else if constexpr (std::is_same_v<T, TaskClaimResult>) {
          j["task"] = v.task_id;
          j["drone"] = v.drone_id;
          j["ok"] = v.ok;
          if (!v.ok) j["error"] = v.error;
        }
      },
      m);
  return j;
}

// transport unit: delivered (or dropped) one tick after sending
struct Envelope {
  Tick sent_at = 0;
  std::string from, to;
  Message body;
};

}  // namespace iod
