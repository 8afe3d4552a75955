#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iod/drone.hpp"
#include "iod/interzone.hpp"
#include "iod/log.hpp"
#include "iod/metrics.hpp"
#include "iod/rng.hpp"
#include "iod/scenario.hpp"
#include "iod/trace.hpp"
#include "iod/trace_check.hpp"
#include "iod/zsp.hpp"

namespace iod {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<Tick> ticks;
  std::optional<double> loss;
  std::optional<bool> admission;
};

struct RunResult {
  Trace trace;
  MetricsSummary metrics;
  std::vector<Violation> violations;
};

// Deterministic tick kernel: inject scenario timers, deliver last tick's
// messages in sorted order (with seeded loss), step ZSPs then drones in id
// order, snapshot world state. Randomness exists only in the loss rolls.
class Engine {
 public:
  explicit Engine(Scenario sc, RunOverrides ov = {}) : sc_(std::move(sc)) {
    if (ov.seed) sc_.sim.seed = *ov.seed;
    if (ov.ticks) sc_.sim.ticks = *ov.ticks;
    if (ov.loss) sc_.sim.loss_prob = *ov.loss;
    if (ov.admission) sc_.sim.admission = *ov.admission;
    interzone_ = derive_interzone(sc_.world);

    std::vector<PeerZsp> all;
    for (const auto& z : sc_.zsps) all.push_back({z.zsp_id, z.zone});
    for (const auto& z : sc_.zsps) {
      ZspConfig cfg;
      cfg.zsp_id = z.zsp_id;
      cfg.owner_iodsp = z.owner;
      cfg.zone = z.zone;
      cfg.admission_enabled = sc_.sim.admission;
      std::vector<PeerZsp> peers;
      for (const auto& p : all)
        if (p.zsp_id != z.zsp_id) peers.push_back(p);
      zsps_.emplace(z.zsp_id,
                    Zsp(cfg, sc_.world.at(z.zone), &interzone_, &sc_.weather, std::move(peers)));
    }
    for (const auto& dc : sc_.drones) drones_.emplace(dc.drone_id, Drone(dc, &sc_.world, &sc_.roster));
    rng_ = Rng(split_seed(sc_.sim.seed, "transport"));
  }

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const Scenario& scenario() const { return sc_; }
  const InterzoneGraph& interzone() const { return interzone_; }
  Zsp& zsp(const std::string& id) { return zsps_.at(id); }
  Drone& drone(const std::string& id) { return drones_.at(id); }

  RunResult run() {
    for (Tick now = 0; now < sc_.sim.ticks; ++now) step_tick(now);
    RunResult r;
    r.metrics = stats(trace_.events());
    r.violations = check_trace(trace_.events(), sc_.world);
    r.trace = std::move(trace_);
    return r;
  }

  // single tick, exposed for protocol-level tests
  void step_tick(Tick now) {
    inject(now);
    deliver(now);
    for (auto& [id, z] : zsps_) {
      z.step(now);
      for (auto& [kind, payload] : z.drain_events()) trace_.emit(now, kind, id, payload);
      enqueue(z.drain_outbox(), now);
    }
    for (auto& [id, d] : drones_) {
      if (d.config().spawn_tick > now) continue;
      StepView view = view_for(d, now);
      d.step(view);
      for (auto& [kind, payload] : d.drain_events()) trace_.emit(now, kind, id, payload);
      enqueue(d.drain_outbox(), now);
    }
    emit_tick_state(now);
  }

 private:
  struct Queued {
    Envelope env;
    std::uint64_t seq = 0;
  };

  void inject(Tick now) {
    for (const auto& t : sc_.trips)
      if (t.request_tick == now) {
        drones_.at(t.drone).add_trip(t.dst, now);
        trace_.emit(now, "trip_request", t.drone, Json{{"dst", t.dst.str()}});
      }
    for (const auto& t : sc_.tasks)
      if (t.post_tick == now) {
        TaskPost post;
        post.task_id = t.task_id;
        post.zone = t.zone;
        post.pickup = t.pickup;
        post.dropoff = t.dropoff;
        post.posted_at = now;
        Envelope env;
        env.sent_at = now;
        env.from = "scenario";
        env.to = sc_.roster.at(t.zone).front();
        env.body = post;
        zsps_.at(env.to).deliver(std::move(env));
        trace_.emit(now, "task_post", t.task_id, Json{{"zone", t.zone}});
      }
  }

  void deliver(Tick now) {
    msg_by_zone_.clear();
    msg_total_ = msg_dropped_ = 0;

    std::vector<Queued> due, keep;
    for (auto& q : in_flight_) {
      if (q.env.sent_at + 1 == now)
        due.push_back(std::move(q));
      else
        keep.push_back(std::move(q));
    }
    in_flight_ = std::move(keep);

    struct Copy {
      std::string recipient;
      const Queued* q;
    };
    std::vector<Copy> copies;
    for (const auto& q : due)
      for (auto& r : resolve(q.env.to, now)) copies.push_back({std::move(r), &q});
    std::sort(copies.begin(), copies.end(), [](const Copy& a, const Copy& b) {
      if (a.recipient != b.recipient) return a.recipient < b.recipient;
      if (a.q->env.from != b.q->env.from) return a.q->env.from < b.q->env.from;
      return a.q->seq < b.q->seq;
    });

    for (const auto& c : copies) {
      ++msg_total_;
      ++msg_by_zone_[zone_of_recipient(c.recipient)];
      if (sc_.sim.loss_prob > 0 && rng_.next_unit() < sc_.sim.loss_prob) {
        ++msg_dropped_;
        trace_.emit(now, "message_dropped", c.recipient,
                    Json{{"msg", message_kind(c.q->env.body)}, {"from", c.q->env.from}});
        continue;
      }
      Envelope copy = c.q->env;
      copy.to = c.recipient;
      if (auto z = zsps_.find(c.recipient); z != zsps_.end())
        z->second.deliver(std::move(copy));
      else if (auto d = drones_.find(c.recipient); d != drones_.end())
        d->second.deliver(std::move(copy));
    }
  }

  std::vector<std::string> resolve(const std::string& to, Tick now) {
    std::vector<std::string> out;
    if (to.rfind("zsps@", 0) == 0) {
      std::string zone = to.substr(5);
      auto it = sc_.roster.find(zone);
      if (it != sc_.roster.end()) out = it->second;
      return out;
    }
    if (to.rfind("drones@", 0) == 0) {
      std::string zone = to.substr(7);
      for (const auto& [id, d] : drones_) {
        if (d.config().spawn_tick > now || d.mode() == "failed") continue;
        for (const auto& z : d.current_element().zones)
          if (z == zone) {
            out.push_back(id);
            break;
          }
      }
      return out;
    }
    if (zsps_.count(to) || drones_.count(to)) out.push_back(to);
    return out;
  }

  std::string zone_of_recipient(const std::string& id) const {
    if (auto z = zsps_.find(id); z != zsps_.end()) return z->second.zone();
    if (auto d = drones_.find(id); d != drones_.end())
      return d->second.current_element().zones.front();
    return "?";
  }

  void enqueue(std::vector<Envelope> msgs, Tick now) {
    for (auto& m : msgs) {
      m.sent_at = now;
      in_flight_.push_back({std::move(m), next_seq_++});
    }
  }

  StepView view_for(const Drone& subject, Tick now) {
    StepView v;
    v.now = now;
    occupancy_.clear();
    for (const auto& [id, d] : drones_) {
      if (d.config().spawn_tick > now) continue;
      if (airborne_mode(d.mode())) ++occupancy_[d.current_element()];
    }
    v.occupancy = &occupancy_;
    const auto& self_zones = subject.current_element().zones;
    for (const auto& [id, d] : drones_) {
      if (id == subject.id() || d.config().spawn_tick > now) continue;
      bool shared = false;
      for (const auto& za : self_zones) {
        for (const auto& zb : d.current_element().zones)
          if (za == zb) shared = true;
      }
      if (!shared) continue;
      v.neighbors.push_back(
          {id, d.position(), d.velocity(), d.current_element(), d.mode(), d.admitted_at()});
    }
    std::string zone = subject.zone().empty() ? self_zones.front() : subject.zone();
    v.wind = sc_.weather.at(zone, now).wind;
    return v;
  }

  void emit_tick_state(Tick now) {
    Json msgs;
    Json by_zone = Json::object();
    for (const auto& [zone, n] : msg_by_zone_) by_zone[zone] = n;
    msgs["by_zone"] = std::move(by_zone);
    msgs["total"] = msg_total_;
    msgs["dropped"] = msg_dropped_;
    trace_.emit(now, "messages", "transport", std::move(msgs));

    Json state;
    Json list = Json::array();
    int spawned = 0;
    for (const auto& [id, d] : drones_) {
      if (d.config().spawn_tick > now) continue;
      ++spawned;
      Json row;
      row["id"] = id;
      row["mode"] = d.mode();
      row["element"] = d.current_element().str();
      row["x"] = d.position().x;
      row["y"] = d.position().y;
      row["z"] = d.position().z;
      row["fuel"] = d.fuel();
      row["zsp"] = d.serving_zsp();
      row["progress"] = d.progress();
      list.push_back(std::move(row));
    }
    state["spawned"] = spawned;
    state["drones"] = std::move(list);
    trace_.emit(now, "tick_state", "world", std::move(state));
  }

  Scenario sc_;
  InterzoneGraph interzone_;
  std::map<std::string, Zsp> zsps_;
  std::map<std::string, Drone> drones_;
  std::vector<Queued> in_flight_;
  std::uint64_t next_seq_ = 0;
  Rng rng_{0};
  Trace trace_;
  std::map<ElementId, int> occupancy_;
  std::map<std::string, int> msg_by_zone_;
  int msg_total_ = 0, msg_dropped_ = 0;
};

inline RunResult run_scenario(Scenario sc, RunOverrides ov = {}) {
  Engine engine(std::move(sc), ov);
  return engine.run();
}

}  // namespace iod
