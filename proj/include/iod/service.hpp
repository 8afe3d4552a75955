#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iod/errors.hpp"
#include "iod/messages.hpp"

namespace iod {

// zone-scoped broadcast message; the payload stays opaque end to end
struct ZoneMessage {
  std::string msg_id, zone, publisher;
  std::vector<std::uint8_t> payload;
  Tick published_at = 0;
  Tick ttl = 1;

  Tick expires_at() const { return published_at + ttl; }
};

// demo application task: package pickup/dropoff, first claim wins
struct Task {
  std::string task_id, zone;
  ElementId pickup, dropoff;
  Tick posted_at = 0;
  std::optional<std::string> claimed_by;
};

// Zone-broadcast store plus the demo task pool; hosted inside the owning ZSP.
// Deliveries reach every drone present at publish time exactly once, and
// drones that enter the zone before the ttl expires.
class ZoneService {
 public:
  std::vector<ZoneDeliver> publish(const ZonePublish& p, const std::vector<std::string>& present,
                                   Tick now) {
    ZoneMessage m;
    m.msg_id = p.msg_id;
    m.zone = p.zone;
    m.publisher = p.publisher;
    m.payload = p.payload;
    m.published_at = now;
    m.ttl = p.ttl;
    if (m.ttl < 1 || live_.count(m.msg_id)) return {};
    live_[m.msg_id] = {m, {}};

    std::vector<ZoneDeliver> out;
    for (const auto& d : present) {
      auto dv = deliver_one(live_[m.msg_id], d);
      if (dv) out.push_back(*dv);
    }
    return out;
  }

  // call for every drone currently tracked in the zone; returns any messages
  // it has not yet received
  std::vector<ZoneDeliver> on_drone_present(const std::string& drone, Tick now) {
    std::vector<ZoneDeliver> out;
    for (auto& [id, pm] : live_) {
      if (now >= pm.msg.expires_at()) continue;
      auto dv = deliver_one(pm, drone);
      if (dv) out.push_back(*dv);
    }
    return out;
  }

  // drop expired messages, returning their ids for the trace
  std::vector<std::string> expire(Tick now) {
    std::vector<std::string> gone;
    for (auto it = live_.begin(); it != live_.end();) {
      if (now >= it->second.msg.expires_at()) {
        gone.push_back(it->first);
        it = live_.erase(it);
      } else {
        ++it;
      }
    }
    return gone;
  }

  void post(const TaskPost& t) {
    Task task;
    task.task_id = t.task_id;
    task.zone = t.zone;
    task.pickup = t.pickup;
    task.dropoff = t.dropoff;
    task.posted_at = t.posted_at;
    tasks_.emplace(t.task_id, std::move(task));
  }

  TaskClaimResult claim(const TaskClaim& c) {
    TaskClaimResult r;
    r.task_id = c.task_id;
    r.drone_id = c.drone_id;
    auto it = tasks_.find(c.task_id);
    if (it == tasks_.end()) {
      r.error = errc_name(Errc::UnknownTask);
      return r;
    }
    if (it->second.claimed_by) {
      r.error = errc_name(Errc::AlreadyClaimed);
      return r;
    }
    it->second.claimed_by = c.drone_id;
    r.ok = true;
    r.pickup = it->second.pickup;
    r.dropoff = it->second.dropoff;
    return r;
  }

  const std::map<std::string, Task>& tasks() const { return tasks_; }
  std::size_t live_messages() const { return live_.size(); }

 private:
  struct PendingMsg {
    ZoneMessage msg;
    std::set<std::string> delivered;
  };

  std::optional<ZoneDeliver> deliver_one(PendingMsg& pm, const std::string& drone) {
    if (!pm.delivered.insert(drone).second) return std::nullopt;
    ZoneDeliver d;
    d.msg_id = pm.msg.msg_id;
    d.zone = pm.msg.zone;
    d.drone_id = drone;
    d.payload = pm.msg.payload;
    return d;
  }

  std::map<std::string, PendingMsg> live_;
  std::map<std::string, Task> tasks_;
};

}  // namespace iod
