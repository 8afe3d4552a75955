#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iod/errors.hpp"
#include "iod/flight_plan.hpp"
#include "iod/messages.hpp"
#include "iod/planning.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

// lowest advertised congestion wins, ties to the smaller zsp id
inline std::string choose_zsp(const std::vector<ZspAdvertisement>& candidates) {
  if (candidates.empty()) raise(Errc::NoCandidates, "no ZSP advertisements");
  const ZspAdvertisement* best = &candidates.front();
  for (const auto& c : candidates)
    if (c.congestion < best->congestion ||
        (c.congestion == best->congestion && c.zsp_id < best->zsp_id))
      best = &c;
  return best->zsp_id;
}

// fuel rule shared by the agent and the unit tests: thresholds on estimated
// time to the contingency node
enum class FuelAction { None, Refuel, Sos };
inline FuelAction check_fuel(double fuel_remaining, double est_ticks_to_contingency) {
  if (fuel_remaining < est_ticks_to_contingency) return FuelAction::Sos;
  if (fuel_remaining < 1.5 * est_ticks_to_contingency) return FuelAction::Refuel;
  return FuelAction::None;
}

struct DroneConfig {
  std::string drone_id, owner;
  PerformanceProfile profile;
  ElementId spawn_node;
  Tick spawn_tick = 0;
  std::optional<Tick> fail_at;  // scenario fault injection
  bool claim_tasks = false;
  Point ground_slot;  // parking column offset from the node center
};

struct NeighborDrone {
  std::string drone_id;
  Point position, velocity;
  ElementId element;
  std::string mode;
  Tick admitted_at = -1;
};

// live per-tick context the engine hands to step(); all reads, no shared state
struct StepView {
  std::vector<NeighborDrone> neighbors;                  // same-zone, sorted by id
  const std::map<ElementId, int>* occupancy = nullptr;   // airborne drones per element
  Point wind;
  Tick now = 0;
};

struct TripGoal {
  ElementId dst;
  Tick requested_at = 0;
  std::string task_id;
};

inline constexpr double kSeparation = 10;       // metres
inline constexpr int kPredictTicks = 5;
inline constexpr int kClearTicks = 3;           // hysteresis before resume
inline constexpr double kHandoffThreshold = 100;
inline constexpr double kClimbRate = 5;         // m/s vertical
inline constexpr double kFloorSpeed = 1;
inline constexpr double kLateralOffset = 5;     // right-of-track offset
inline constexpr double kVerticalOffset = 4;    // direction-keyed level offset
inline constexpr Tick kRetryInterval = 5;
inline constexpr Tick kRefuelTicks = 10;
inline constexpr Tick kPrepTicks = 3;           // takeoff lead in admission requests

// Drone agent: follows its flight chain, broadcasts, keeps fuel margins,
// negotiates admission and handoff, yields per the avoidance rules. The
// world map pointer stands in for onboard chart data and is read-only.
class Drone {
 public:
  Drone(DroneConfig cfg, const std::map<std::string, ZoneGraph>* world,
        const std::map<std::string, std::vector<std::string>>* roster)
      : cfg_(std::move(cfg)), world_(world), roster_(roster) {
    fuel_ = cfg_.profile.fuel_capacity;
    at_node_ = cfg_.spawn_node;
    zone_ = at_node_.zones.front();
    current_element_ = at_node_;
    position_ = ground_point(at_node_);
  }

  const std::string& id() const { return cfg_.drone_id; }
  const DroneConfig& config() const { return cfg_; }
  const std::string& mode() const { return mode_; }
  const std::string& serving_zsp() const { return serving_zsp_; }
  const std::string& zone() const { return zone_; }
  const ElementId& current_element() const { return current_element_; }
  const Point& position() const { return position_; }
  const Point& velocity() const { return velocity_; }
  double fuel() const { return fuel_; }
  Tick admitted_at() const { return admitted_at_; }
  double progress() const {
    if (!chain_) return 0;
    const ChainSpan& s = chain_->span_at(arc_);
    return s.hi > s.lo ? (arc_ - s.lo) / (s.hi - s.lo) : 1.0;
  }
  const std::optional<Pathway>& pathway() const { return pathway_; }

  void add_trip(const ElementId& dst, Tick requested_at, const std::string& task_id = {}) {
    pending_trips_.push_back({dst, requested_at, task_id});
  }

  void deliver(Envelope env) { inbox_.push_back(std::move(env)); }
  std::vector<Envelope> drain_outbox() { return std::exchange(outbox_, {}); }
  std::vector<std::pair<std::string, Json>> drain_events() { return std::exchange(events_, {}); }

  void step(const StepView& view) {
    const Tick now = view.now;
    if (mode_ == "failed") return;
    if (cfg_.fail_at && now >= *cfg_.fail_at && mode_ != "landed") {
      set_mode("failed", now);
      velocity_ = {};
      return;
    }

    Point before = position_;
    for (auto& env : std::exchange(inbox_, {})) handle(env, now);

    if (mode_ == "grounded" || mode_ == "landed") {
      ground_step(view);
    } else {
      flight_step(view);
    }

    if (airborne_mode(mode_)) {
      fuel_ = std::max(0.0, fuel_ - 1.0);
      ++airborne_ticks_;
      if (fuel_ <= 0 && phase_ != Phase::Descend) {
        if (current_element_.kind == ElementKind::Node) {
          begin_descent(now, /*emergency=*/true);
        } else {
          event("fuel_exhausted", {{"element", current_element_.str()}}, now);
          set_mode("failed", now);
          velocity_ = {};
          return;
        }
      }
    }

    velocity_ = position_ - before;
    broadcast(view);
  }

 private:
  enum class Phase { Ground, Climb, Cruise, Descend };

  // ---- inbound protocol ----
  void handle(const Envelope& env, Tick now) {
    std::visit([&](const auto& m) { on(m, env, now); }, env.body);
  }

  void on(const PathwayResponse& r, const Envelope& env, Tick now) {
    if (!r.ok) {
      if (handoff_active() && env.from == ho_to_zsp_) {
        event("next_leg_failed", {{"error", r.error}}, now);
        return;
      }
      event("trip_aborted", {{"error", r.error}}, now);
      abort_trip(now);
      return;
    }
    if (handoff_active() && env.from == ho_to_zsp_) {
      bleg_ = r.pathway;
      bleg_partial_ = r.partial;
      request_trajectory_for_first_airway(r.pathway, ho_to_zsp_, now);
      return;
    }
    if (env.from != serving_zsp_) return;
    if (mode_ == "grounded") {
      pathway_ = r.pathway;
      leg_partial_ = r.partial;
      return;
    }
    adopt_replan(r.pathway, r.partial, now);
  }

  void on(const TrajectoryResponse& r, const Envelope&, Tick now) {
    if (r.ok) {
      traj_granted_.insert(r.trajectory.element);
    } else {
      event("trajectory_denied", {{"error", r.error}}, now);
    }
  }

  void on(const AdmissionDecision& d, const Envelope&, Tick now) {
    admission_pending_ = false;
    if (d.admit) {
      admitted_ = true;
      start_tick_ = std::max(d.start_tick, now);
    } else {
      earliest_retry_ = now + std::max<Tick>(1, d.delay);
      event("admission_deferred", {{"delay", d.delay}}, now);
    }
  }

  void on(const PreciseControl& pc, const Envelope& env, Tick now) {
    if (env.from != serving_zsp_) {
      event("rejected_not_serving", {{"from", env.from}, {"cmd", cmd_name(pc.cmd)}}, now);
      return;
    }
    switch (pc.cmd) {
      case PreciseControl::Cmd::Hold:
        if (!airborne_mode(mode_)) break;
        if (cfg_.profile.hover) {
          cmd_hold_ = true;
        } else {
          divert_to_contingency(now, /*emergency=*/false);
        }
        break;
      case PreciseControl::Cmd::Resume:
        cmd_hold_ = false;
        break;
      case PreciseControl::Cmd::Land:
        if (!airborne_mode(mode_)) break;
        if (pc.target_element)
          divert_to(*pc.target_element, now, /*emergency=*/false, /*abort=*/true);
        else
          divert_to_contingency(now, /*emergency=*/false);
        break;
      case PreciseControl::Cmd::MoveTo:
        if (pc.target_element && trip_) {
          PathwayRequest req;
          req.drone_id = cfg_.drone_id;
          req.src = current_element_;
          req.dst = *pc.target_element;
          req.profile = cfg_.profile;
          req.owner = cfg_.owner;
          send(serving_zsp_, req);
        }
        break;
    }
  }

  void on(const RefuelResponse& r, const Envelope&, Tick now) {
    if (!r.ok) {
      event("refuel_unavailable", {{"error", r.error}}, now);
      return;
    }
    if (!airborne_mode(mode_) || !trip_) return;
    resume_dst_ = trip_->dst;
    refuel_leg_ = true;
    adopt_replan(r.pathway, false, now);
    event("refuel_diverting", {{"station", r.pathway.dst.str()}}, now);
  }

  void on(const HandoffAccept& a, const Envelope&, Tick now) {
    if (!handoff_active()) return;
    ho_state_ = HoState::Accepted;
    ho_to_zsp_ = a.to_zsp;
    if (!bleg_requested_) {
      bleg_requested_ = true;
      PathwayRequest req;
      req.drone_id = cfg_.drone_id;
      req.src = ho_gate_;
      req.dst = effective_dst();
      req.profile = cfg_.profile;
      req.owner = cfg_.owner;
      send(ho_to_zsp_, req);
    }
    event("handoff_accepted", {{"to_zsp", a.to_zsp}, {"gate", a.gate.str()}}, now);
  }

  void on(const ZspAdvertisement& ad, const Envelope&, Tick) { ads_[ad.zsp_id] = ad; }

  void on(const WeatherReport&, const Envelope&, Tick) {}

  void on(const ZoneDeliver& zd, const Envelope& env, Tick now) {
    event("zone_delivered", {{"msg_id", zd.msg_id}}, now);
    if (!cfg_.claim_tasks || trip_ || !pending_trips_.empty()) return;
    std::string text(zd.payload.begin(), zd.payload.end());
    if (zd.msg_id.rfind("task:", 0) != 0) return;
    TaskClaim c;
    c.task_id = text;
    c.drone_id = cfg_.drone_id;
    send(env.from, c);  // claim with whichever ZSP ran the delivery
  }

  void on(const TaskClaimResult& r, const Envelope&, Tick now) {
    if (!r.ok) {
      event("task_lost", {{"task", r.task_id}, {"error", r.error}}, now);
      return;
    }
    claimed_task_ = r.task_id;
    add_trip(r.pickup, now, r.task_id);
    add_trip(r.dropoff, now, r.task_id);
    event("task_won", {{"task", r.task_id}}, now);
  }

  template <class M>
  void on(const M&, const Envelope&, Tick) {}  // other catalog messages: not for drones

  // ---- ground behavior ----
  void ground_step(const StepView& view) {
    const Tick now = view.now;

    if (refuel_until_ > 0) {
      if (now < refuel_until_) return;
      fuel_ = cfg_.profile.fuel_capacity;
      refuel_until_ = -1;
      refuel_requested_ = false;
      refuel_leg_ = false;
      pathway_.reset();
      admitted_ = false;
      if (resume_dst_) event("refuel_done", {{"resume", resume_dst_->str()}}, now);
      resume_dst_.reset();
    }

    if (!trip_ && !pending_trips_.empty() && now >= pending_trips_.front().requested_at) {
      trip_ = pending_trips_.front();
      pending_trips_.pop_front();
      pathway_.reset();
      admitted_ = false;
      admission_pending_ = false;
      earliest_retry_ = 0;
      set_mode("grounded", now);
      event("trip_started", {{"dst", trip_->dst.str()}}, now);
    }
    if (!trip_) return;

    if (trip_->dst == at_node_) {
      finish_trip(now);
      return;
    }

    ensure_serving(zone_of(at_node_), now);

    if (!pathway_ && now - pathway_requested_at_ >= kRetryInterval) {
      pathway_requested_at_ = now;
      PathwayRequest req;
      req.drone_id = cfg_.drone_id;
      req.src = at_node_;
      req.dst = effective_dst();
      req.profile = cfg_.profile;
      req.owner = cfg_.owner;
      send(serving_zsp_, req);
      return;
    }
    if (!pathway_) return;

    if (!admitted_ && !admission_pending_ && now >= earliest_retry_) {
      admission_pending_ = true;
      AdmissionRequest req;
      req.drone_id = cfg_.drone_id;
      req.pathway = *pathway_;
      req.final_dst = effective_dst();
      req.start_tick = now + kPrepTicks;
      req.profile = cfg_.profile;
      send(serving_zsp_, req);
      return;
    }
    if (!admitted_) return;

    auto first_awy = first_airway(*pathway_);
    if (first_awy && !traj_granted_.count(*first_awy)) {
      request_trajectory(*first_awy, serving_zsp_, now);
      return;
    }

    if (now < start_tick_ || cmd_hold_) return;
    int node_occ = occ_of(view, at_node_);
    if (node_occ >= capacity_of(at_node_)) return;  // wait for an airspace slot

    takeoff(now);
  }

  void takeoff(Tick now) {
    chain_ = FlightChain::build(zone_graph(zone_of(at_node_)), *pathway_);
    arc_ = 0;
    current_element_ = at_node_;
    admitted_at_ = start_tick_;
    phase_ = Phase::Climb;
    emergency_ = false;
    set_mode("airborne", now);
    event("takeoff", {{"node", at_node_.str()}, {"dst", pathway_->dst.str()}}, now);
  }

  // ---- flight behavior ----
  void flight_step(const StepView& view) {
    const Tick now = view.now;

    if (phase_ == Phase::Climb) {
      double target = cruise_altitude(0);
      alt_ = std::min(target, alt_ + kClimbRate);
      double f = target > 0 ? alt_ / target : 1;
      Point start_col = ground_point(at_node_);
      Point cruise0 = rendered(0);
      position_ = {start_col.x + (cruise0.x - start_col.x) * f,
                   start_col.y + (cruise0.y - start_col.y) * f, alt_};
      if (alt_ >= target) {
        phase_ = Phase::Cruise;
        position_ = cruise0;
      }
      return;
    }

    if (phase_ == Phase::Descend) {
      Point col = ground_point(descend_node_);
      double top = descend_top_;
      alt_ = std::max(0.0, alt_ - kClimbRate);
      double f = top > 0 ? alt_ / top : 0;
      Point from = descend_from_;
      position_ = {col.x + (from.x - col.x) * f, col.y + (from.y - col.y) * f, alt_};
      if (alt_ <= 0) touch_down(now);
      return;
    }

    // cruise
    if (!emergency_) run_fuel_check(now);
    update_avoidance(view);
    if (leg_partial_) approach_handoff(view);

    bool holding = cmd_hold_ || avoid_hold_ || wait_handoff_ || blocked_;
    blocked_ = false;
    wait_handoff_ = false;

    if (!(cmd_hold_ || avoid_hold_)) {
      double speed = slow_ ? kFloorSpeed : ground_speed(view);
      advance(speed, view);
      holding = cmd_hold_ || avoid_hold_ || wait_handoff_ || blocked_;
    }

    if (phase_ == Phase::Cruise) {
      position_ = rendered(arc_);
      alt_ = position_.z;
      std::string want = emergency_ ? "emergency" : (holding ? "holding" : "airborne");
      set_mode(want, now);
    }
  }

  double ground_speed(const StepView& view) const {
    double air = std::min(cfg_.profile.max_speed, speed_limit_of(current_element_));
    Point t = tangent(arc_);
    double txy = std::hypot(t.x, t.y);
    if (txy < 1e-9) return std::max(kFloorSpeed, air);
    double proj = (view.wind.x * t.x + view.wind.y * t.y) / txy;
    return std::max(kFloorSpeed, air + proj);
  }

  void advance(double dist, const StepView& view) {
    const Tick now = view.now;
    double remaining = dist;
    int guard = 0;
    while (remaining > 1e-9 && ++guard < 64) {
      double total = chain_->total();
      if (arc_ >= total) {
        at_chain_end(view);
        return;
      }
      // next span boundary strictly ahead
      double boundary = total;
      const ChainSpan* next = nullptr;
      for (const auto& s : chain_->spans()) {
        if (s.lo > arc_ + 1e-9 && s.lo < boundary && s.hi > s.lo) {
          boundary = s.lo;
          next = &s;
        }
      }
      double gap = boundary - arc_;
      if (remaining < gap - 1e-9) {
        arc_ += remaining;
        return;
      }
      if (!next) {  // final stretch to the chain end
        arc_ = total;
        remaining = 0;
        at_chain_end(view);
        return;
      }
      if (!can_enter(next->element, view)) {
        arc_ = boundary - 1e-6;
        blocked_ = true;
        return;
      }
      arc_ = boundary;
      remaining -= gap;
      enter(next->element, now);
    }
  }

  bool can_enter(const ElementId& el, const StepView& view) {
    if (el.kind == ElementKind::Airway && !traj_granted_.count(el)) {
      request_trajectory(el, serving_zsp_, view.now);
      return false;
    }
    if (occ_of(view, el) >= capacity_of(el)) return false;
    return true;
  }

  void enter(const ElementId& el, Tick now) {
    current_element_ = el;
    // keep one airway of trajectory lookahead
    auto idx = chain_->span_index(el);
    if (idx) {
      const auto& spans = chain_->spans();
      for (std::size_t i = *idx + 1; i < spans.size(); ++i) {
        const ElementId& ahead = spans[i].element;
        if (ahead.kind != ElementKind::Airway) continue;
        if (!traj_granted_.count(ahead)) request_trajectory(ahead, serving_zsp_, now);
        break;
      }
    }
  }

  void at_chain_end(const StepView& view) {
    const Tick now = view.now;
    if (leg_partial_) {
      cross_gate_or_wait(now);
      return;
    }
    begin_descent(now, emergency_);
  }

  void begin_descent(Tick now, bool emergency) {
    emergency_ = emergency;
    descend_node_ = current_element_.kind == ElementKind::Node ? current_element_
                                                               : (pathway_ ? pathway_->dst : at_node_);
    descend_from_ = position_;
    descend_top_ = position_.z;
    phase_ = Phase::Descend;
    set_mode(emergency_ ? "emergency" : "landing", now);
  }

  void touch_down(Tick now) {
    at_node_ = descend_node_;
    zone_ = zone_of(at_node_);
    current_element_ = at_node_;
    position_ = ground_point(at_node_);
    alt_ = 0;
    phase_ = Phase::Ground;
    chain_.reset();
    arc_ = 0;
    traj_granted_.clear();
    cmd_hold_ = avoid_hold_ = slow_ = blocked_ = wait_handoff_ = false;
    reset_handoff();

    if (emergency_) {
      emergency_ = false;
      event("emergency_landed", {{"node", at_node_.str()}}, now);
      set_mode("landed", now);  // leave the airborne lifecycle before the abort
      abort_trip(now);
      return;
    }
    if (refuel_leg_) {
      refuel_until_ = now + kRefuelTicks;
      set_mode("grounded", now);
      event("refuel_started", {{"station", at_node_.str()}}, now);
      pathway_.reset();
      admitted_ = false;
      return;
    }
    if (trip_ && trip_->dst == at_node_) {
      finish_trip(now);
      return;
    }
    // ordered landing or diverted leg: trip continues from here if possible
    pathway_.reset();
    admitted_ = false;
    set_mode(trip_ || !pending_trips_.empty() ? "grounded" : "landed", now);
  }

  void finish_trip(Tick now) {
    event("trip_completed",
          {{"dst", at_node_.str()}, {"task", trip_ ? trip_->task_id : std::string{}}}, now);
    trip_.reset();
    pathway_.reset();
    admitted_ = false;
    refuel_requested_ = false;
    set_mode(pending_trips_.empty() ? "landed" : "grounded", now);
  }

  void abort_trip(Tick now) {
    trip_.reset();
    pathway_.reset();
    bleg_.reset();
    admitted_ = false;
    refuel_leg_ = false;
    resume_dst_.reset();
    if (!airborne_mode(mode_)) set_mode(pending_trips_.empty() ? "landed" : "grounded", now);
  }

  // ---- handoff ----
  enum class HoState { None, Requested, Accepted, FailedHold };
  bool handoff_active() const { return ho_state_ != HoState::None; }

  void approach_handoff(const StepView& view) {
    const Tick now = view.now;
    double to_end = chain_->total() - arc_;
    if (to_end > kHandoffThreshold) return;
    if (ho_state_ == HoState::None) {
      ho_gate_ = pathway_->dst;
      std::string next_zone = other_zone(ho_gate_, zone_);
      ho_to_zsp_ = pick_zsp(next_zone, now);
    }
    bool due = ho_state_ == HoState::None ||
               ((ho_state_ == HoState::Requested || ho_state_ == HoState::FailedHold) &&
                now - ho_last_request_ >= kRetryInterval);
    if (!due) return;
    ho_last_request_ = now;
    if (ho_state_ == HoState::None) ho_state_ = HoState::Requested;
    HandoffRequest req;
    req.drone_id = cfg_.drone_id;
    req.from_zsp = serving_zsp_;
    req.gate = ho_gate_;
    req.snapshot.element = current_element_;
    req.snapshot.progress = progress();
    req.snapshot.position = position_;
    req.snapshot.fuel_remaining = fuel_;
    req.snapshot.route_remaining = {ho_gate_};
    req.snapshot.trip_dst = effective_dst();
    req.snapshot.admitted_at = admitted_at_;
    req.profile = cfg_.profile;
    req.owner = cfg_.owner;
    send(ho_to_zsp_, req);
    if (ho_state_ == HoState::Requested && ho_first_request_ < 0) ho_first_request_ = now;
  }

  void cross_gate_or_wait(Tick now) {
    if (ho_state_ == HoState::Accepted && bleg_) {
      HandoffComplete done;
      done.drone_id = cfg_.drone_id;
      done.from_zsp = serving_zsp_;
      done.to_zsp = ho_to_zsp_;
      done.gate = ho_gate_;
      send(serving_zsp_, done);
      send(ho_to_zsp_, done);
      event("handoff_completed", {{"gate", ho_gate_.str()}, {"to_zsp", ho_to_zsp_}}, now);

      serving_zsp_ = ho_to_zsp_;
      zone_ = other_zone(ho_gate_, zone_);
      pathway_ = bleg_;
      leg_partial_ = bleg_partial_;
      bleg_.reset();
      bleg_requested_ = false;
      bleg_partial_ = false;
      chain_ = FlightChain::build(zone_graph(zone_), *pathway_);
      arc_ = 0;
      current_element_ = ho_gate_;
      traj_granted_.clear();
      reset_handoff();
      enter(ho_gate_, now);
      return;
    }
    if (ho_state_ != HoState::FailedHold && ho_state_ != HoState::Accepted) {
      event("handoff_failed", {{"gate", ho_gate_.str()}, {"to_zsp", ho_to_zsp_}}, now);
      if (cfg_.profile.hover) {
        ho_state_ = HoState::FailedHold;
      } else {
        divert_to_contingency(now, /*emergency=*/false);
        return;
      }
    }
    wait_handoff_ = true;
  }

  void reset_handoff() {
    ho_state_ = HoState::None;
    ho_to_zsp_.clear();
    ho_last_request_ = -100;
    ho_first_request_ = -1;
  }

  // ---- avoidance ----
  void update_avoidance(const StepView& view) {
    const Tick now = view.now;
    if (current_element_.kind == ElementKind::Node) {
      avoid_hold_ = slow_ = false;
      return;
    }
    bool conflict = false;
    for (const auto& n : view.neighbors) {
      if (!airborne_mode(n.mode) || n.element.kind == ElementKind::Node) continue;
      if (!adjacent_elements(current_element_, n.element)) continue;
      bool mine = yields_to(n);
      if (!mine) continue;
      for (int t = 1; t <= kPredictTicks; ++t) {
        Point a = position_ + velocity_ * static_cast<double>(t);
        Point b = n.position + n.velocity * static_cast<double>(t);
        if (distance(a, b) < kSeparation) {
          conflict = true;
          break;
        }
      }
      if (conflict) break;
    }
    if (conflict) {
      if (!avoid_hold_ && !slow_) event("avoid_yield", {{"element", current_element_.str()}}, now);
      if (cfg_.profile.hover)
        avoid_hold_ = true;
      else
        slow_ = true;
      clear_ticks_ = 0;
    } else if (avoid_hold_ || slow_) {
      if (++clear_ticks_ >= kClearTicks) {
        avoid_hold_ = slow_ = false;
        event("avoid_resume", {}, now);
      }
    }
  }

  // the later-admitted drone yields; ties to the larger id
  bool yields_to(const NeighborDrone& n) const {
    if (admitted_at_ != n.admitted_at) return admitted_at_ > n.admitted_at;
    return cfg_.drone_id > n.drone_id;
  }

  bool adjacent_elements(const ElementId& a, const ElementId& b) const {
    if (a == b) return true;
    const ZoneGraph& zg = zone_graph(zone_);
    auto ends = [&](const ElementId& awy) -> std::pair<const ElementId*, const ElementId*> {
      const Element* e = zg.find(awy);
      if (!e || !e->meta.from || !e->meta.to) return {nullptr, nullptr};
      return {&*e->meta.from, &*e->meta.to};
    };
    if (a.kind == ElementKind::Airway && b.kind == ElementKind::Airway) {
      auto [af, at] = ends(a);
      auto [bf, bt] = ends(b);
      if (!af || !bf) return false;
      return *af == *bf || *af == *bt || *at == *bf || *at == *bt;
    }
    if (a.kind == ElementKind::Airway) {
      auto [af, at] = ends(a);
      return af && (*af == b || *at == b);
    }
    if (b.kind == ElementKind::Airway) {
      auto [bf, bt] = ends(b);
      return bf && (*bf == a || *bt == a);
    }
    return false;
  }

  // ---- fuel ----
  void run_fuel_check(Tick now) {
    if (!pathway_ || !chain_) return;
    double speed = std::max(1.0, cfg_.profile.max_speed);
    double remaining_m = (chain_->total() - arc_) + pathway_->contingency_extra_m;
    double est = remaining_m / speed + alt_ / kClimbRate + 5;
    FuelAction act = iod::check_fuel(fuel_, est);
    if (act == FuelAction::Sos) {
      Sos sos;
      sos.drone_id = cfg_.drone_id;
      sos.element = current_element_;
      sos.position = position_;
      sos.reason = "fuel";
      send(serving_zsp_, sos);
      event("sos_sent", {{"fuel", fuel_}, {"est", est}}, now);
      divert_to_contingency(now, /*emergency=*/true);
    } else if (act == FuelAction::Refuel && !refuel_requested_ && !refuel_leg_) {
      refuel_requested_ = true;
      RefuelRequest req;
      req.drone_id = cfg_.drone_id;
      req.fuel_remaining = fuel_;
      send(serving_zsp_, req);
      event("refuel_requested", {{"fuel", fuel_}, {"est", est}}, now);
    }
  }

  // ---- diversion ----
  void divert_to_contingency(Tick now, bool emergency) {
    ElementId target = pathway_ && !pathway_->contingency.local.empty() ? pathway_->contingency
                                                                        : at_node_;
    divert_to(target, now, emergency, /*abort=*/true);
  }

  void divert_to(const ElementId& target, Tick now, bool emergency, bool abort) {
    emergency_ = emergency;
    if (abort) {
      resume_dst_.reset();
      refuel_leg_ = false;
    }
    if (current_element_ == target) {
      begin_descent(now, emergency);
      return;
    }
    try {
      PlanConstraints c;
      c.profile = cfg_.profile;
      c.requester_owner = cfg_.owner;
      Pathway p = shortest_pathway(zone_graph(zone_), current_element_, target, c, now);
      p.contingency = target;
      adopt_replan(p, false, now);
      if (abort) trip_.reset();
      event(emergency ? "emergency_diverting" : "diverting", {{"target", target.str()}}, now);
    } catch (const Error& e) {
      if (current_element_.kind == ElementKind::Node) {
        begin_descent(now, emergency);
      } else {
        event("divert_failed", {{"error", errc_name(e.code())}}, now);
        set_mode("failed", now);
      }
    }
  }

  void adopt_replan(const Pathway& p, bool partial, Tick now) {
    FlightChain fresh = FlightChain::build(zone_graph(zone_), p);
    auto idx = fresh.span_index(current_element_);
    if (!idx) {
      event("replan_stale", {{"src", p.src.str()}}, now);
      return;
    }
    double frac = progress();
    pathway_ = p;
    leg_partial_ = partial;
    chain_ = std::move(fresh);
    const ChainSpan& s = chain_->spans()[*idx];
    arc_ = s.lo + frac * (s.hi - s.lo);
    if (emergency_) leg_partial_ = false;
  }

  // ---- helpers ----
  void ensure_serving(const std::string& zone, Tick now) {
    if (!serving_zsp_.empty()) return;
    serving_zsp_ = pick_zsp(zone, now);
  }

  std::string pick_zsp(const std::string& zone, Tick now) const {
    std::vector<ZspAdvertisement> fresh;
    for (const auto& [id, ad] : ads_)
      if (ad.zone == zone && now - ad.tick <= 15) fresh.push_back(ad);
    if (!fresh.empty()) return choose_zsp(fresh);
    auto it = roster_->find(zone);
    if (it == roster_->end() || it->second.empty())
      raise(Errc::NoCandidates, "no ZSP for zone " + zone);
    return it->second.front();
  }

  ElementId effective_dst() const {
    if (refuel_leg_ && resume_dst_) return *resume_dst_;
    return trip_ ? trip_->dst : at_node_;
  }

  std::optional<ElementId> first_airway(const Pathway& p) const {
    for (const auto& el : p.elements)
      if (el.kind == ElementKind::Airway) return el;
    return std::nullopt;
  }

  void request_trajectory(const ElementId& el, const std::string& zsp, Tick now) {
    auto it = traj_requested_at_.find(el);
    if (it != traj_requested_at_.end() && now - it->second < kRetryInterval) return;
    traj_requested_at_[el] = now;
    TrajectoryRequest req;
    req.drone_id = cfg_.drone_id;
    req.element = el;
    send(zsp, req);
  }

  void request_trajectory_for_first_airway(const Pathway& p, const std::string& zsp, Tick now) {
    auto awy = first_airway(p);
    if (awy) request_trajectory(*awy, zsp, now);
  }

  const ZoneGraph& zone_graph(const std::string& zone) const {
    auto it = world_->find(zone);
    if (it == world_->end()) raise(Errc::UnknownElement, "zone " + zone);
    return it->second;
  }

  std::string zone_of(const ElementId& el) const { return el.zones.front(); }

  std::string other_zone(const ElementId& gate, const std::string& zone) const {
    for (const auto& z : gate.zones)
      if (z != zone) return z;
    return zone;
  }

  const Element* find_element(const ElementId& el) const {
    for (const auto& z : el.zones) {
      auto it = world_->find(z);
      if (it == world_->end()) continue;
      if (const Element* e = it->second.find(el)) return e;
    }
    return nullptr;
  }

  int capacity_of(const ElementId& el) const {
    const Element* e = find_element(el);
    return e ? e->meta.capacity : 1;
  }

  double speed_limit_of(const ElementId& el) const {
    const Element* e = find_element(el);
    if (!e) return cfg_.profile.max_speed;
    auto lim = e->meta.speed_limit();
    return lim ? *lim : cfg_.profile.max_speed;
  }

  int occ_of(const StepView& view, const ElementId& el) const {
    if (!view.occupancy) return 0;
    auto it = view.occupancy->find(el);
    return it == view.occupancy->end() ? 0 : it->second;
  }

  Point ground_point(const ElementId& node) const {
    const Element* e = find_element(node);
    Point c = e ? center_of(e->geometry) : Point{};
    return {c.x + cfg_.ground_slot.x, c.y + cfg_.ground_slot.y, 0};
  }

  Point tangent(double arc) const {
    double h = 0.5;
    Point a = chain_->point_at(std::max(0.0, arc - h));
    Point b = chain_->point_at(std::min(chain_->total(), arc + h));
    Point d = b - a;
    double n = norm(d);
    return n > 1e-12 ? d * (1.0 / n) : Point{1, 0, 0};
  }

  // offset flight levels: 5 m right of track, plus a direction-keyed 4 m
  // vertical split so opposing traffic in one corridor stays separated. The
  // offset tapers to zero toward sphere-span edges, which keeps the rendered
  // point inside the sphere (the chain chord passes through its center), and
  // vanishes inside nodes (free flight, column climbs).
  Point rendered(double arc) const {
    Point base = chain_->point_at(arc);
    const ChainSpan& s = chain_->span_at(arc);
    double f = 1;
    if (s.element.kind == ElementKind::Node) {
      f = 0;
    } else if (s.element.kind != ElementKind::Airway) {
      double edge = std::min(arc - s.lo, s.hi - arc);
      f = std::clamp(edge / 10.0, 0.0, 1.0);
    }
    if (f <= 0) return base;
    Point t = tangent(arc);
    double txy = std::hypot(t.x, t.y);
    if (txy < 1e-9) return base;
    Point right{t.y / txy, -t.x / txy, 0};
    double key = t.x > 1e-9 ? 1 : (t.x < -1e-9 ? -1 : (t.y > 1e-9 ? 1 : -1));
    Point p = base + right * (kLateralOffset * f);
    p.z += key * kVerticalOffset * f;
    return p;
  }

  double cruise_altitude(double arc) const { return rendered(arc).z; }

  void set_mode(const std::string& m, Tick now) {
    if (mode_ == m) return;
    event("mode", {{"from", mode_}, {"to", m}}, now);
    mode_ = m;
  }

  void broadcast(const StepView& view) {
    const Tick now = view.now;
    if (mode_ == "failed") return;
    bool airborne = airborne_mode(mode_);
    bool n2n_due = airborne ? (airborne_ticks_ % 5 == 0 && airborne_ticks_ > 0) : (now % 5 == 0);
    bool pos_due = airborne || now % 5 == 0;
    if (!pos_due && !n2n_due) return;

    std::vector<std::string> zones(current_element_.zones.begin(), current_element_.zones.end());
    if (pos_due) {
      PositionBroadcast pb;
      pb.drone_id = cfg_.drone_id;
      pb.position = position_;
      pb.element = current_element_;
      pb.progress = progress();
      for (int k = 1; k <= 5; ++k) pb.future.push_back(position_ + velocity_ * static_cast<double>(k));
      pb.mode = mode_;
      pb.serving_zsp = serving_zsp_;
      pb.admitted_at = admitted_at_;
      pb.tick = now;
      for (const auto& z : zones) send("zsps@" + z, pb);
    }
    if (n2n_due) {
      N2NBroadcast nb;
      nb.drone_id = cfg_.drone_id;
      nb.element = current_element_;
      nb.progress = progress();
      nb.fuel_remaining = fuel_;
      nb.mode = mode_;
      if (chain_) {
        auto idx = chain_->span_index(current_element_);
        if (idx)
          for (std::size_t i = *idx; i < chain_->spans().size(); ++i)
            nb.future_path.push_back(chain_->spans()[i].element);
      }
      nb.serving_zsp = serving_zsp_;
      nb.admitted_at = admitted_at_;
      nb.tick = now;
      for (const auto& z : zones) send("zsps@" + z, nb);
    }
  }

  template <class M>
  void send(const std::string& to, M msg) {
    Envelope env;
    env.from = cfg_.drone_id;
    env.to = to;
    env.body = std::move(msg);
    outbox_.push_back(std::move(env));
  }

  void event(const std::string& kind, Json payload, Tick now) {
    payload["tick"] = now;
    events_.push_back({kind, std::move(payload)});
  }

  DroneConfig cfg_;
  const std::map<std::string, ZoneGraph>* world_;
  const std::map<std::string, std::vector<std::string>>* roster_;

  std::vector<Envelope> inbox_, outbox_;
  std::vector<std::pair<std::string, Json>> events_;

  std::string mode_ = "grounded";
  Phase phase_ = Phase::Ground;
  std::string zone_, serving_zsp_;
  ElementId at_node_, current_element_;
  Point position_, velocity_;
  double alt_ = 0;
  double fuel_ = 0;

  std::deque<TripGoal> pending_trips_;
  std::optional<TripGoal> trip_;
  std::optional<Pathway> pathway_;
  bool leg_partial_ = false;
  std::optional<FlightChain> chain_;
  double arc_ = 0;

  bool admitted_ = false, admission_pending_ = false;
  Tick earliest_retry_ = 0, start_tick_ = 0, admitted_at_ = -1;
  Tick pathway_requested_at_ = -100;
  std::set<ElementId> traj_granted_;
  std::map<ElementId, Tick> traj_requested_at_;

  bool cmd_hold_ = false, avoid_hold_ = false, slow_ = false, blocked_ = false,
       wait_handoff_ = false;
  int clear_ticks_ = 0;

  HoState ho_state_ = HoState::None;
  std::string ho_to_zsp_;
  ElementId ho_gate_;
  Tick ho_last_request_ = -100, ho_first_request_ = -1;
  std::optional<Pathway> bleg_;
  bool bleg_requested_ = false, bleg_partial_ = false;

  bool refuel_requested_ = false, refuel_leg_ = false;
  std::optional<ElementId> resume_dst_;
  Tick refuel_until_ = -1;
  bool emergency_ = false;

  std::map<std::string, ZspAdvertisement> ads_;
  std::string claimed_task_;
  Tick airborne_ticks_ = 0;

  ElementId descend_node_;
  Point descend_from_;
  double descend_top_ = 0;
};

}  // namespace iod
