// Minimal end-to-end demo: one drone flies nA -> nB across the two-zone
// fixture world, crossing the A|B gate with a live handoff.

#include <iostream>

#include "iod/iod.hpp"

using namespace iod;

int main() {
  Scenario sc;
  sc.world = fixtures::two_zones();
  sc.zones = {"A", "B"};
  sc.zsps = {{"zspA", "A", "iodsp1"}, {"zspB", "B", "iodsp1"}};
  sc.roster = {{"A", {"zspA"}}, {"B", {"zspB"}}};

  DroneConfig d;
  d.drone_id = "d01";
  d.owner = "iodsp1";
  d.profile = fixtures::default_profile();
  d.spawn_node = ElementId("A", ElementKind::Node, "nA");
  sc.drones.push_back(d);
  sc.trips.push_back({"d01", ElementId("B", ElementKind::Node, "nB"), 0});
  sc.sim.seed = 1;
  sc.sim.ticks = 150;

  RunResult r = run_scenario(std::move(sc));
  std::cout << "trips completed: " << r.metrics.completed_trips() << "\n";
  for (const auto& e : r.trace.events())
    if (e.kind == "takeoff" || e.kind == "handoff_completed" || e.kind == "trip_completed")
      std::cout << "tick " << e.tick << "  " << e.kind << "  " << e.payload.dump() << "\n";
  std::cout << "violations: " << r.violations.size() << "\n";
  for (const auto& v : r.violations)
    std::cout << "  tick " << v.tick << " [" << v.code << "] " << v.subject << ": " << v.detail << "\n";
  return r.violations.empty() ? 0 : 2;
}
