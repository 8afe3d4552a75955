#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iod/admission.hpp"
#include "iod/errors.hpp"
#include "iod/flight_plan.hpp"
#include "iod/interzone.hpp"
#include "iod/messages.hpp"
#include "iod/planning.hpp"
#include "iod/service.hpp"
#include "iod/weather.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

struct ZspConfig {
  std::string zsp_id, owner_iodsp, zone;
  Tick silence_timeout = 15;   // 3 missed N2N intervals
  Tick quarantine_ticks = 60;
  double ecn_threshold = 0.8;
  Tick ecn_ttl = 30;
  Tick broadcast_interval = 5;  // advertisement + ECN scan cadence
  Tick mitigate_cooldown = 10;
  AdmissionParams admission;
  bool admission_enabled = true;
};

struct PeerZsp {
  std::string zsp_id, zone;
};

struct TrackEntry {
  std::string drone_id;
  ElementId current_element;
  double progress = 0;
  std::vector<ElementId> future_path;
  double fuel_remaining = 0;
  Tick last_broadcast = 0;
  Point position;
  std::string mode = "grounded";
  bool serving = false;
  Tick admitted_at = -1;
};

// Zone Service Provider: a message-driven state machine owning one zone map,
// drone tracking, planning, admission, congestion reporting and the zone
// service host. All outputs are messages (outbox) and trace events.
class Zsp {
 public:
  Zsp(ZspConfig cfg, ZoneGraph map, const InterzoneGraph* interzone, const WeatherTimeline* weather,
      std::vector<PeerZsp> peers)
      : cfg_(std::move(cfg)),
        map_(std::move(map)),
        interzone_(interzone),
        weather_(weather),
        peers_(std::move(peers)) {}

  const std::string& id() const { return cfg_.zsp_id; }
  const std::string& zone() const { return cfg_.zone; }
  const ZspConfig& config() const { return cfg_; }
  const ZoneGraph& map() const { return map_; }
  const std::map<std::string, TrackEntry>& live() const { return live_; }
  const std::vector<EcnNotice>& active_ecn() const { return ecn_; }
  ReservationTable& reservations() { return table_; }
  ZoneService& service() { return service_; }
  void set_admission_enabled(bool on) { cfg_.admission_enabled = on; }

  void deliver(Envelope env) { inbox_.push_back(std::move(env)); }

  std::vector<Envelope> drain_outbox() { return std::exchange(outbox_, {}); }
  std::vector<std::pair<std::string, Json>> drain_events() { return std::exchange(events_, {}); }

  // ---- per-tick entry point ----
  void step(Tick now) {
    for (auto& env : std::exchange(inbox_, {})) dispatch(env, now);

    purge_ecn(now);
    expire_quarantines(now);
    detect_silent(now);
    prune_stale(now);
    for (auto& [id, entry] : live_)
      for (auto& d : service_.on_drone_present(id, now)) send(id, d);
    for (const auto& gone : service_.expire(now)) event("zone_msg_expired", {{"msg_id", gone}}, now);
    if (now % cfg_.broadcast_interval == 0) {
      advertise(now);
      ecn_scan(now);
    }
    for (auto& [drone, pc] : mitigate(now)) send(drone, pc);
  }

  // ---- operations (public so tests can drive them directly) ----

  void ingest_broadcast(const PositionBroadcast& b, Tick now) {
    require_in_zone(b.element);
    TrackEntry& e = live_[b.drone_id];
    e.drone_id = b.drone_id;
    e.current_element = b.element;
    e.progress = b.progress;
    e.position = b.position;
    e.mode = b.mode;
    e.serving = b.serving_zsp == cfg_.zsp_id;
    e.admitted_at = b.admitted_at;
    e.last_broadcast = now;
  }

  void ingest_broadcast(const N2NBroadcast& b, Tick now) {
    require_in_zone(b.element);
    TrackEntry& e = live_[b.drone_id];
    e.drone_id = b.drone_id;
    e.current_element = b.element;
    e.progress = b.progress;
    e.fuel_remaining = b.fuel_remaining;
    e.future_path = b.future_path;
    e.mode = b.mode;
    e.serving = b.serving_zsp == cfg_.zsp_id;
    e.admitted_at = b.admitted_at;
    e.last_broadcast = now;
  }

  PlanConstraints constraints(const PerformanceProfile& profile, const std::string& owner,
                              Tick now) const {
    PlanConstraints c;
    c.profile = profile;
    c.requester_owner = owner;
    c.wind_speed = weather_report(now).wind_speed();
    for (const auto& [el, until] : quarantine_)
      if (now < until) c.excluded.insert(el);
    return c;
  }

  Pathway plan_pathway(const ElementId& src, const ElementId& dst, const PerformanceProfile& profile,
                       const std::string& owner, Tick now) const {
    return iod::plan_pathway(map_, src, dst, constraints(profile, owner, now), now);
  }

  Trajectory plan_trajectory(const Pathway& pathway, const ElementId& element,
                             const PerformanceProfile& profile) const {
    return make_trajectory(map_, pathway, element, profile);
  }

  // pathway to the nearest fuel-station node matching the profile's fuel kind
  Pathway refuel_pathway(const ElementId& from, const PerformanceProfile& profile,
                         const std::string& owner, Tick now) const {
    auto c = constraints(profile, owner, now);
    std::optional<ElementId> best;
    double best_dist = 0;
    for (const auto& [vid, v] : map_.vertices) {
      if (vid.kind != ElementKind::Node || !v.landing_capable()) continue;
      if (v.fuel_kind() != profile.fuel_kind || profile.fuel_kind.empty()) continue;
      if (!detail::element_usable(v, c)) continue;
      std::optional<detail::Label> label;
      if (vid == from)
        label = detail::Label{0.0, {}};
      else
        label = detail::route_to(map_, from, vid, c);
      if (!label) continue;
      if (!best || label->dist < best_dist || (label->dist == best_dist && vid < *best)) {
        best = vid;
        best_dist = label->dist;
      }
    }
    if (!best) raise(Errc::NoCompatibleStation, "fuel kind " + profile.fuel_kind);
    return plan_pathway(from, *best, profile, owner, now);
  }

  // mark element unusable for the quarantine window and replan/hold affected drones
  void handle_sos(const ElementId& element, Tick now, const std::string& reason) {
    require_in_zone(element);
    Tick until = now + cfg_.quarantine_ticks;
    auto it = quarantine_.find(element);
    quarantine_[element] = it == quarantine_.end() ? until : std::max(it->second, until);
    event("quarantine", {{"element", element.str()}, {"until", quarantine_[element]}, {"reason", reason}},
          now);

    for (auto& [drone, entry] : live_) {
      if (!entry.serving || !airborne_mode(entry.mode)) continue;
      if (entry.current_element == element) {
        send_control(drone, entry, PreciseControl::Cmd::Hold, now);
        continue;
      }
      auto pit = pathways_.find(drone);
      if (pit == pathways_.end() || !pit->second.covers(element)) continue;
      try {
        Pathway fresh = plan_pathway(entry.current_element, pit->second.dst,
                                     profile_of(drone), owner_of(drone), now);
        pathways_[drone] = fresh;
        refresh_reservations(drone, entry, now);
        PathwayResponse r;
        r.drone_id = drone;
        r.ok = true;
        r.pathway = fresh;
        send(drone, r);
        event("sos_replan", {{"drone", drone}, {"around", element.str()}}, now);
      } catch (const Error&) {
        send_control(drone, entry, PreciseControl::Cmd::Hold, now);
      }
    }
  }

  // serving airborne drones silent beyond the timeout are declared failed
  std::vector<std::string> detect_silent(Tick now) {
    std::vector<std::string> failed;
    for (auto& [drone, entry] : live_) {
      if (!entry.serving || !airborne_mode(entry.mode)) continue;
      if (now - entry.last_broadcast > cfg_.silence_timeout) failed.push_back(drone);
    }
    for (const auto& drone : failed) {
      TrackEntry entry = live_[drone];
      event("declared_failed",
            {{"drone", drone}, {"element", entry.current_element.str()}, {"silent_for", now - entry.last_broadcast}},
            now);
      live_.erase(drone);
      pathways_.erase(drone);
      table_.erase(drone);
      handle_sos(entry.current_element, now, "silent drone " + drone);
    }
    return failed;
  }

  CongestionReport congestion_report(const ElementId& src, const ElementId& dst, Tick now) const {
    CongestionReport r;
    r.zone = cfg_.zone;
    r.src = src;
    r.dst = dst;
    PlanConstraints structural;
    structural.use_performance = false;
    structural.use_access = false;
    Pathway p = shortest_pathway(map_, src, dst, structural);  // throws NoPath
    auto occ = occupancy(now);
    auto ratio = [&](const ElementId& id) {
      const Element* e = map_.find(id);
      int cap = e ? e->meta.capacity : 1;
      int o = occ.count(id) ? occ.at(id) : 0;
      double x = cap > 0 ? static_cast<double>(o) / cap : (o > 0 ? 1.0 : 0.0);
      return x;
    };
    r.ratios.push_back({src, ratio(src)});
    for (const auto& el : p.elements) r.ratios.push_back({el, ratio(el)});
    if (!(dst == src)) r.ratios.push_back({dst, ratio(dst)});
    for (auto& [el, x] : r.ratios) r.aggregate = std::max(r.aggregate, x);
    return r;
  }

  WeatherReport weather_report(Tick now) const {
    if (!weather_) {
      WeatherReport calm;
      calm.zone = cfg_.zone;
      return calm;
    }
    return weather_->at(cfg_.zone, now);
  }

  // direct command to a tracked drone; Hold downgrades to Land(contingency)
  // for non-hover craft
  PreciseControl precise_control(const std::string& drone_id, PreciseControl::Cmd cmd, Tick now) {
    auto it = live_.find(drone_id);
    if (it == live_.end()) raise(Errc::UnknownDrone, drone_id);
    PreciseControl pc = control_for(it->second, cmd, now);
    if (pc.cmd != cmd) event("hold_downgraded", {{"drone", drone_id}, {"cmd", cmd_name(pc.cmd)}}, now);
    send(drone_id, pc);
    return pc;
  }

  AdmissionDecision decide_admission(const AdmissionRequest& req, Tick now) {
    AdmissionDecision d;
    d.drone_id = req.drone_id;
    d.start_tick = req.start_tick;
    if (!cfg_.admission_enabled) {
      d.admit = true;
      return d;
    }
    auto candidate = own_zone_reservations(req.drone_id, req.pathway, req.start_tick, req.profile);
    auto cap = capacity_fn();
    if (table_.admits(candidate, cap)) {
      d.admit = true;
      table_.replace(req.drone_id, candidate);
      share_shadow(req, now);
    } else {
      // only admitted flights occupy the table; a denied drone is told the
      // earliest admissible shift and re-requests, so requests arriving the
      // same tick serialize against each fresh grant
      auto shift = table_.first_admitting_shift(candidate, cap, cfg_.admission);
      d.admit = false;
      d.delay = shift ? *shift : cfg_.admission.max_delay;
    }
    return d;
  }

  // overload response: latest-admitted serving drones are held (hover, with
  // upstream slack) or grounded until occupancy fits capacity again
  std::vector<std::pair<std::string, PreciseControl>> mitigate(Tick now) {
    std::vector<std::pair<std::string, PreciseControl>> directives;
    auto occ = occupancy(now);
    std::set<std::string> held;
    for (const auto& [el, count] : occ) {
      int cap = effective_capacity(el, now);
      if (count <= cap) continue;
      std::vector<const TrackEntry*> caught;
      for (const auto& [drone, entry] : live_) {
        if (!entry.serving || !airborne_mode(entry.mode) || !(entry.current_element == el)) continue;
        auto mit = mitigated_.find(drone);
        if (mit != mitigated_.end() && now - mit->second < cfg_.mitigate_cooldown) continue;
        caught.push_back(&entry);
      }
      std::sort(caught.begin(), caught.end(), [](const TrackEntry* a, const TrackEntry* b) {
        if (a->admitted_at != b->admitted_at) return a->admitted_at > b->admitted_at;
        return a->drone_id > b->drone_id;
      });
      int surplus = count - cap;
      for (const TrackEntry* entry : caught) {
        if (surplus <= 0) break;
        PreciseControl pc = control_for(*entry, PreciseControl::Cmd::Hold, now);
        directives.push_back({entry->drone_id, pc});
        mitigated_[entry->drone_id] = now;
        held.insert(entry->drone_id);
        event("mitigate",
              {{"drone", entry->drone_id}, {"element", el.str()}, {"cmd", cmd_name(pc.cmd)}}, now);
        --surplus;
      }
    }

    // release holds once the element fits its capacity again
    for (auto it = mitigated_.begin(); it != mitigated_.end();) {
      if (held.count(it->first) || now - it->second < cfg_.mitigate_cooldown) {
        ++it;
        continue;
      }
      auto lt = live_.find(it->first);
      if (lt == live_.end()) {
        it = mitigated_.erase(it);
        continue;
      }
      const ElementId& el = lt->second.current_element;
      auto oc = occ.find(el);
      if (oc != occ.end() && oc->second > effective_capacity(el, now)) {
        ++it;
        continue;
      }
      directives.push_back({it->first, control_for(lt->second, PreciseControl::Cmd::Resume, now)});
      event("mitigate_lifted", {{"drone", it->first}, {"element", el.str()}}, now);
      it = mitigated_.erase(it);
    }
    return directives;
  }

  // Airborne drones broadcast every tick, so a non-serving track more than a
  // few ticks quiet is a drone that left the zone; counting it would inflate
  // occupancy with phantoms. The track itself stays (handoff registrations
  // hang off it) until prune_stale retires it.
  std::map<ElementId, int> occupancy(Tick now) const {
    std::map<ElementId, int> occ;
    for (const auto& [drone, entry] : live_) {
      if (!airborne_mode(entry.mode)) continue;
      if (!entry.serving && now - entry.last_broadcast > 3) continue;
      ++occ[entry.current_element];
    }
    return occ;
  }

  int effective_capacity(const ElementId& el, Tick now) const {
    auto q = quarantine_.find(el);
    if (q != quarantine_.end() && now < q->second) return 0;
    const Element* e = map_.find(el);
    return e ? e->meta.capacity : 0;
  }

  bool quarantined(const ElementId& el, Tick now) const {
    auto q = quarantine_.find(el);
    return q != quarantine_.end() && now < q->second;
  }

  const ReservationTable& reservations() const { return table_; }

 private:
  // ---- message dispatch ----
  void dispatch(const Envelope& env, Tick now) {
    std::visit([&](const auto& m) { handle(m, env, now); }, env.body);
  }

  void handle(const PositionBroadcast& b, const Envelope&, Tick now) {
    try {
      ingest_broadcast(b, now);
    } catch (const Error&) {
      event("foreign_broadcast", {{"drone", b.drone_id}, {"element", b.element.str()}}, now);
    }
  }

  void handle(const N2NBroadcast& b, const Envelope&, Tick now) {
    try {
      ingest_broadcast(b, now);
      refresh_on_progress(b.drone_id, now);
    } catch (const Error&) {
      event("foreign_broadcast", {{"drone", b.drone_id}, {"element", b.element.str()}}, now);
    }
  }

  void handle(const PathwayRequest& req, const Envelope&, Tick now) {
    profiles_[req.drone_id] = req.profile;
    owners_[req.drone_id] = req.owner;
    PathwayResponse resp;
    resp.drone_id = req.drone_id;
    try {
      ElementId dst = req.dst;
      bool partial = false;
      if (!req.dst.in_zone(cfg_.zone)) {
        auto gate = next_gate(*interzone_, cfg_.zone, req.dst.zones.front(), ecn_, now);
        if (!gate) raise(Errc::Unreachable, req.dst.str());
        dst = *gate;
        partial = !(dst == req.src);
      }
      resp.pathway = plan_pathway(req.src, dst, req.profile, req.owner, now);
      resp.partial = partial;
      resp.ok = true;
      pathways_[req.drone_id] = resp.pathway;
      auto it = live_.find(req.drone_id);
      if (it != live_.end() && airborne_mode(it->second.mode))
        refresh_reservations(req.drone_id, it->second, now);
    } catch (const Error& e) {
      resp.ok = false;
      resp.error = errc_name(e.code());
    }
    send(req.drone_id, resp);
  }

  void handle(const TrajectoryRequest& req, const Envelope&, Tick now) {
    TrajectoryResponse resp;
    resp.drone_id = req.drone_id;
    auto pit = pathways_.find(req.drone_id);
    try {
      if (pit == pathways_.end()) raise(Errc::NotOnPathway, req.element.str());
      resp.trajectory = plan_trajectory(pit->second, req.element, profile_of(req.drone_id));
      resp.ok = true;
    } catch (const Error& e) {
      resp.ok = false;
      resp.error = errc_name(e.code());
    }
    (void)now;
    send(req.drone_id, resp);
  }

  void handle(const RefuelRequest& req, const Envelope&, Tick now) {
    RefuelResponse resp;
    resp.drone_id = req.drone_id;
    auto it = live_.find(req.drone_id);
    try {
      if (it == live_.end()) raise(Errc::UnknownDrone, req.drone_id);
      resp.pathway =
          refuel_pathway(it->second.current_element, profile_of(req.drone_id), owner_of(req.drone_id), now);
      resp.ok = true;
      pathways_[req.drone_id] = resp.pathway;
      refresh_reservations(req.drone_id, it->second, now);
    } catch (const Error& e) {
      resp.ok = false;
      resp.error = errc_name(e.code());
    }
    send(req.drone_id, resp);
  }

  void handle(const Sos& s, const Envelope&, Tick now) {
    event("sos", {{"drone", s.drone_id}, {"element", s.element.str()}, {"reason", s.reason}}, now);
    try {
      handle_sos(s.element, now, s.reason);
    } catch (const Error&) {
      event("sos_foreign_element", {{"element", s.element.str()}}, now);
    }
  }

  void handle(const CongestionQuery& q, const Envelope& env, Tick now) {
    CongestionReport r;
    try {
      r = congestion_report(q.src, q.dst, now);
    } catch (const Error& e) {
      r.zone = cfg_.zone;
      r.src = q.src;
      r.dst = q.dst;
      r.ok = false;
      r.error = errc_name(e.code());
    }
    send(env.from, r);
  }

  void handle(const WeatherQuery&, const Envelope& env, Tick now) {
    send(env.from, weather_report(now));
  }

  void handle(const WeatherReport&, const Envelope&, Tick) {}

  void handle(const HandoffRequest& req, const Envelope&, Tick now) {
    TrackEntry& e = live_[req.drone_id];
    e.drone_id = req.drone_id;
    e.current_element = req.snapshot.element;
    e.progress = req.snapshot.progress;
    e.position = req.snapshot.position;
    e.fuel_remaining = req.snapshot.fuel_remaining;
    e.mode = "airborne";
    e.serving = false;
    e.admitted_at = req.snapshot.admitted_at;
    e.last_broadcast = now;
    profiles_[req.drone_id] = req.profile;
    owners_[req.drone_id] = req.owner;
    event("handoff_registered", {{"drone", req.drone_id}, {"gate", req.gate.str()}}, now);
    HandoffAccept acc;
    acc.drone_id = req.drone_id;
    acc.to_zsp = cfg_.zsp_id;
    acc.gate = req.gate;
    send(req.drone_id, acc);
  }

  void handle(const HandoffAccept&, const Envelope&, Tick) {}

  void handle(const HandoffComplete& hc, const Envelope&, Tick now) {
    if (hc.to_zsp == cfg_.zsp_id) {
      auto it = live_.find(hc.drone_id);
      if (it != live_.end()) it->second.serving = true;
      event("serving_gained", {{"drone", hc.drone_id}, {"gate", hc.gate.str()}}, now);
    }
    if (hc.from_zsp == cfg_.zsp_id) {
      live_.erase(hc.drone_id);
      pathways_.erase(hc.drone_id);
      table_.erase(hc.drone_id);
      event("serving_released", {{"drone", hc.drone_id}, {"gate", hc.gate.str()}}, now);
    }
  }

  void handle(const EcnNotice& n, const Envelope&, Tick now) {
    if (n.expired(now)) {
      event("ecn_stale", {{"origin", n.origin_zsp}}, now);
      return;
    }
    std::erase_if(ecn_, [&](const EcnNotice& old) {
      return old.origin_zsp == n.origin_zsp && old.zone == n.zone && old.to_gate == n.to_gate &&
             old.from_gate == n.from_gate;
    });
    ecn_.push_back(n);
  }

  void handle(const ZspAdvertisement& ad, const Envelope&, Tick) { ads_[ad.zsp_id] = ad; }

  void handle(const AdmissionRequest& req, const Envelope&, Tick now) {
    AdmissionDecision d = decide_admission(req, now);
    event("admission",
          {{"drone", req.drone_id}, {"admit", d.admit}, {"delay", d.delay}, {"start_tick", d.start_tick}},
          now);
    send(req.drone_id, d);
  }

  void handle(const ShadowReserve& sr, const Envelope&, Tick now) {
    if (sr.release) {
      table_.erase(sr.drone_id);
      return;
    }
    try {
      PlanConstraints c = constraints(sr.profile, sr.owner, now);
      auto label = detail::route_to(map_, sr.entry_gate, sr.next_dst, c);
      if (!label) return;
      std::vector<ReserveElement> seq;
      seq.push_back(reserve_element(sr.entry_gate, 0));
      for (const auto& el : label->path) {
        const Element* e = map_.find(el);
        seq.push_back(reserve_element(el, e && el.kind == ElementKind::Airway ? e->length() : 0));
      }
      table_.replace(sr.drone_id,
                     shadow_reserve(sr.drone_id, seq, sr.entry_eta, sr.profile, cfg_.admission,
                                    sr.entry_weight));
    } catch (const Error&) {
      // entry gate unknown here: ignore, the sender's prediction was off
    }
  }

  void handle(const ZonePublish& p, const Envelope&, Tick now) {
    std::vector<std::string> present;
    for (const auto& [drone, entry] : live_) present.push_back(drone);
    auto deliveries = service_.publish(p, present, now);
    event("zone_publish", {{"msg_id", p.msg_id}, {"recipients", deliveries.size()}}, now);
    for (auto& d : deliveries) send(d.drone_id, d);
  }

  void handle(const ZoneDeliver&, const Envelope&, Tick) {}

  void handle(const TaskPost& t, const Envelope&, Tick now) {
    service_.post(t);
    event("task_posted", {{"task", t.task_id}}, now);
    ZonePublish ann;
    ann.msg_id = "task:" + t.task_id;
    ann.zone = cfg_.zone;
    ann.publisher = cfg_.zsp_id;
    const std::string text = t.task_id;
    ann.payload.assign(text.begin(), text.end());
    ann.published_at = now;
    ann.ttl = 30;
    handle(ann, Envelope{}, now);
  }

  void handle(const TaskClaim& c, const Envelope&, Tick now) {
    TaskClaimResult r = service_.claim(c);
    event("task_claim", {{"task", c.task_id}, {"drone", c.drone_id}, {"ok", r.ok}}, now);
    send(c.drone_id, r);
  }

  // drone-bound kinds that a ZSP may still receive on broadcast addresses
  template <class M>
  void handle(const M&, const Envelope&, Tick) {}

  // ---- internals ----

  void require_in_zone(const ElementId& el) const {
    if (!el.in_zone(cfg_.zone)) raise(Errc::UnknownElement, el.str() + " not in zone " + cfg_.zone);
    if (!map_.contains_element(el)) raise(Errc::UnknownElement, el.str());
  }

  const PerformanceProfile& profile_of(const std::string& drone) const {
    auto it = profiles_.find(drone);
    if (it == profiles_.end()) raise(Errc::UnknownDrone, drone);
    return it->second;
  }

  std::string owner_of(const std::string& drone) const {
    auto it = owners_.find(drone);
    return it == owners_.end() ? std::string{} : it->second;
  }

  ReserveElement reserve_element(const ElementId& el, double length) const {
    ReserveElement r;
    r.element = el;
    r.length = length;
    if (const Element* e = map_.find(el))
      if (auto lim = e->meta.speed_limit()) r.speed_limit = *lim;
    return r;
  }

  std::vector<Reservation> own_zone_reservations(const std::string& drone, const Pathway& p,
                                                 Tick start, const PerformanceProfile& profile) const {
    std::vector<ReserveElement> seq;
    seq.push_back(reserve_element(p.src, 0));
    for (const auto& el : p.elements) {
      const Element* e = map_.find(el);
      seq.push_back(reserve_element(el, e && el.kind == ElementKind::Airway ? e->length() : 0));
    }
    if (!(p.dst == p.src) || !p.elements.empty()) seq.push_back(reserve_element(p.dst, 0));
    return shadow_reserve(drone, seq, start, profile, cfg_.admission);
  }

  CapacityFn capacity_fn() const {
    return [this](const ElementId& el) -> std::optional<int> {
      const Element* e = map_.find(el);
      if (!e) return std::nullopt;
      return e->meta.capacity;
    };
  }

  // forward the next-zone horizon to the ZSPs that own it
  void share_shadow(const AdmissionRequest& req, Tick now) {
    if (req.route.empty() || !interzone_) return;
    const ElementId& gate = req.route.front();
    std::string next_zone;
    for (const auto& z : gate.zones)
      if (z != cfg_.zone) next_zone = z;
    if (next_zone.empty()) return;

    ShadowReserve sr;
    sr.drone_id = req.drone_id;
    sr.origin_zsp = cfg_.zsp_id;
    sr.entry_gate = gate;
    sr.profile = req.profile;
    sr.owner = owner_of(req.drone_id);
    double eta = 0;
    double speed = std::max(1.0, req.profile.max_speed);
    eta = req.pathway.length_m / speed;
    sr.entry_eta = req.start_tick + static_cast<Tick>(std::ceil(eta));
    std::size_t n = req.pathway.elements.size() + 2;  // src + interior + gate
    sr.entry_weight = std::pow(cfg_.admission.rho, static_cast<double>(n));
    if (req.route.size() >= 2)
      sr.next_dst = req.route[1];  // exit gate of the next zone
    else
      sr.next_dst = req.final_dst;  // trip ends in the next zone
    for (const auto& peer : peers_)
      if (peer.zone == next_zone) send(peer.zsp_id, sr);
    (void)now;
  }

  void refresh_reservations(const std::string& drone, const TrackEntry& entry, Tick now) {
    if (!cfg_.admission_enabled) return;
    auto pit = pathways_.find(drone);
    if (pit == pathways_.end()) return;
    const Pathway& p = pit->second;
    if (!p.covers(entry.current_element)) return;
    std::vector<ReserveElement> seq;
    bool started = false;
    if (entry.current_element == p.src) started = true;
    if (started) seq.push_back(reserve_element(p.src, 0));
    for (const auto& el : p.elements) {
      if (el == entry.current_element) started = true;
      if (!started) continue;
      const Element* e = map_.find(el);
      seq.push_back(reserve_element(el, e && el.kind == ElementKind::Airway ? e->length() : 0));
    }
    if (!(p.dst == p.src) || !p.elements.empty()) seq.push_back(reserve_element(p.dst, 0));
    table_.replace(drone, shadow_reserve(drone, seq, now, profile_of(drone), cfg_.admission));
  }

  void refresh_on_progress(const std::string& drone, Tick now) {
    auto it = live_.find(drone);
    if (it == live_.end() || !it->second.serving) return;
    if (it->second.mode == "landed" || it->second.mode == "failed") {
      table_.erase(drone);
      return;
    }
    if (airborne_mode(it->second.mode)) refresh_reservations(drone, it->second, now);
  }

  PreciseControl control_for(const TrackEntry& entry, PreciseControl::Cmd want, Tick now) const {
    PreciseControl pc;
    pc.drone_id = entry.drone_id;
    const PerformanceProfile* prof = nullptr;
    auto pit = profiles_.find(entry.drone_id);
    if (pit != profiles_.end()) prof = &pit->second;
    if (want == PreciseControl::Cmd::Hold && prof && !prof->hover) {
      pc.cmd = PreciseControl::Cmd::Land;  // hold downgraded for non-hover craft
      auto pw = pathways_.find(entry.drone_id);
      if (pw != pathways_.end() && !pw->second.contingency.local.empty())
        pc.target_element = pw->second.contingency;
    } else {
      pc.cmd = want;
    }
    (void)now;
    return pc;
  }

  void send_control(const std::string& drone, const TrackEntry& entry, PreciseControl::Cmd want,
                    Tick now) {
    PreciseControl pc = control_for(entry, want, now);
    if (pc.cmd != want)
      event("hold_downgraded", {{"drone", drone}, {"cmd", cmd_name(pc.cmd)}}, now);
    send(drone, pc);
  }

  void purge_ecn(Tick now) {
    std::erase_if(ecn_, [&](const EcnNotice& n) { return n.expired(now); });
  }

  void expire_quarantines(Tick now) {
    for (auto it = quarantine_.begin(); it != quarantine_.end();) {
      if (now >= it->second) {
        event("quarantine_lifted", {{"element", it->first.str()}}, now);
        it = quarantine_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void prune_stale(Tick now) {
    for (auto it = live_.begin(); it != live_.end();) {
      const TrackEntry& e = it->second;
      bool stale = now - e.last_broadcast > cfg_.silence_timeout;
      bool quiet = !e.serving || !airborne_mode(e.mode);
      if (stale && quiet) {
        pathways_.erase(it->first);
        it = live_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void advertise(Tick now) {
    ZspAdvertisement ad;
    ad.zsp_id = cfg_.zsp_id;
    ad.zone = cfg_.zone;
    ad.tick = now;
    auto occ = occupancy(now);
    for (const auto& [el, count] : occ) {
      const Element* e = map_.find(el);
      if (!e || e->meta.capacity <= 0) continue;
      ad.congestion = std::max(ad.congestion, static_cast<double>(count) / e->meta.capacity);
    }
    ad.congestion = std::clamp(ad.congestion, 0.0, 1.0);
    std::set<std::string> zones{cfg_.zone};
    for (const auto& z : map_.adjacent_zones()) zones.insert(z);
    for (const auto& z : zones) send("drones@" + z, ad);
  }

  // scan own transits and gates, publish ECN when the ratio crosses threshold
  void ecn_scan(Tick now) {
    if (!interzone_) return;
    auto occ = occupancy(now);
    auto ratio_of = [&](const ElementId& id) {
      const Element* e = map_.find(id);
      if (!e) return 0.0;
      int cap = effective_capacity(id, now);
      int o = occ.count(id) ? occ.at(id) : 0;
      if (cap <= 0) return o > 0 ? 1.0 : 0.0;
      return static_cast<double>(o) / cap;
    };

    std::vector<EcnNotice> fresh;
    for (const auto& t : interzone_->transits) {
      if (t.zone != cfg_.zone) continue;
      double worst = 0;
      try {
        PlanConstraints structural;
        structural.use_performance = false;
        structural.use_access = false;
        Pathway p = shortest_pathway(map_, t.from_gate, t.to_gate, structural);
        worst = ratio_of(t.from_gate);
        for (const auto& el : p.elements) worst = std::max(worst, ratio_of(el));
        worst = std::max(worst, ratio_of(t.to_gate));
      } catch (const Error&) {
        continue;
      }
      if (worst < cfg_.ecn_threshold) continue;
      EcnNotice n;
      n.origin_zsp = cfg_.zsp_id;
      n.zone = cfg_.zone;
      n.from_gate = t.from_gate;
      n.to_gate = t.to_gate;
      n.level = std::clamp((worst - cfg_.ecn_threshold) / 0.2, 0.0, 1.0);
      n.issued_at = now;
      n.ttl = cfg_.ecn_ttl;
      fresh.push_back(n);
    }
    for (const Element* g : map_.gates()) {
      double r = ratio_of(g->id);
      if (r < cfg_.ecn_threshold) continue;
      EcnNotice n;
      n.origin_zsp = cfg_.zsp_id;
      n.zone = cfg_.zone;
      n.to_gate = g->id;
      n.level = std::clamp((r - cfg_.ecn_threshold) / 0.2, 0.0, 1.0);
      n.issued_at = now;
      n.ttl = cfg_.ecn_ttl;
      fresh.push_back(n);
    }

    std::vector<std::string> adjv = map_.adjacent_zones();
    std::set<std::string> adj(adjv.begin(), adjv.end());
    for (const auto& n : fresh) {
      handle(n, Envelope{}, now);  // own routing sees it too
      event("ecn_published",
            {{"to_gate", n.to_gate.str()},
             {"from_gate", n.from_gate ? n.from_gate->str() : ""},
             {"level", n.level}},
            now);
      for (const auto& peer : peers_) {
        if (peer.zsp_id == cfg_.zsp_id) continue;
        if (peer.zone == cfg_.zone || adj.count(peer.zone)) send(peer.zsp_id, n);
      }
    }
  }

  template <class M>
  void send(const std::string& to, M msg) {
    Envelope env;
    env.from = cfg_.zsp_id;
    env.to = to;
    env.body = std::move(msg);
    outbox_.push_back(std::move(env));
  }

  void event(const std::string& kind, Json payload, Tick now) {
    payload["tick"] = now;
    events_.push_back({kind, std::move(payload)});
  }

  ZspConfig cfg_;
  ZoneGraph map_;
  const InterzoneGraph* interzone_ = nullptr;
  const WeatherTimeline* weather_ = nullptr;
  std::vector<PeerZsp> peers_;

  std::vector<Envelope> inbox_, outbox_;
  std::vector<std::pair<std::string, Json>> events_;

  std::map<std::string, TrackEntry> live_;
  std::map<std::string, Pathway> pathways_;          // last issued per drone
  std::map<std::string, PerformanceProfile> profiles_;
  std::map<std::string, std::string> owners_;
  std::map<ElementId, Tick> quarantine_;             // element -> until tick
  std::vector<EcnNotice> ecn_;
  std::map<std::string, ZspAdvertisement> ads_;
  std::map<std::string, Tick> mitigated_;
  ReservationTable table_;
  ZoneService service_;
};

}  // namespace iod
