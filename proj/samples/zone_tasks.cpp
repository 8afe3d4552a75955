// Service-layer demo: post a pickup task into zone A; idle drones race to
// claim it, the winner flies pickup then dropoff.

#include <iostream>

#include "iod/iod.hpp"

using namespace iod;

int main() {
  Scenario sc;
  sc.world = fixtures::two_zones();
  sc.zones = {"A", "B"};
  sc.zsps = {{"zspA", "A", "iodsp1"}, {"zspB", "B", "iodsp1"}};
  sc.roster = {{"A", {"zspA"}}, {"B", {"zspB"}}};

  for (const char* id : {"d01", "d02"}) {
    DroneConfig d;
    d.drone_id = id;
    d.owner = "iodsp1";
    d.profile = fixtures::default_profile();
    d.spawn_node = ElementId("A", ElementKind::Node, "nA");
    d.claim_tasks = true;
    sc.drones.push_back(d);
  }
  sc.drones[1].ground_slot = {10, 0, 0};

  TaskSpec t;
  t.task_id = "pkg-1";
  t.zone = "A";
  t.pickup = ElementId("A", ElementKind::Node, "nA");
  t.dropoff = ElementId("B", ElementKind::Node, "nB");
  t.post_tick = 5;
  sc.tasks.push_back(t);

  sc.sim.seed = 2;
  sc.sim.ticks = 200;

  RunResult r = run_scenario(std::move(sc));
  for (const auto& e : r.trace.events())
    if (e.kind == "task_posted" || e.kind == "task_claim" || e.kind == "task_won" ||
        e.kind == "trip_completed")
      std::cout << "tick " << e.tick << "  " << e.subject << "  " << e.kind << "  "
                << e.payload.dump() << "\n";
  return 0;
}
