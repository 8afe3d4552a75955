#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iod/iod.hpp"

namespace {

using namespace iod;

int cmd_validate(const std::string& path) {
  try {
    Scenario sc = load_scenario(path);
    std::cout << "valid: " << sc.zones.size() << " zones, " << sc.drones.size() << " drones, "
              << sc.trips.size() << " trips\n";
    for (const auto& w : sc.report.warnings)
      std::cout << "warning [" << w.code << "] " << w.subject << ": " << w.message << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const std::string& path, RunOverrides ov, const std::string& out,
            const std::string& metrics_path) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const Error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
  Engine engine(std::move(sc), ov);
  RunResult r = engine.run();

  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return 1;
    }
    r.trace.write(f);
  }
  if (!metrics_path.empty()) {
    std::ofstream f(metrics_path);
    if (!f) {
      std::cerr << "cannot write " << metrics_path << "\n";
      return 1;
    }
    write_metrics_csv(r.metrics, f);
    std::ofstream occ(metrics_path + ".occupancy.csv");
    write_occupancy_csv(r.trace.events(), occ);
  }

  std::cout << "ticks " << engine.scenario().sim.ticks << ", trips completed "
            << r.metrics.completed_trips() << ", groundings " << r.metrics.groundings()
            << ", holdings " << r.metrics.holdings() << ", denials " << r.metrics.denials()
            << ", messages " << r.metrics.messages_total << " (dropped "
            << r.metrics.messages_dropped << "), trace digest " << std::hex << r.trace.digest()
            << std::dec << "\n";

  if (!r.violations.empty()) {
    std::size_t shown = 0;
    for (const auto& v : r.violations) {
      if (++shown > 20) {
        std::cerr << "... " << r.violations.size() - 20 << " more\n";
        break;
      }
      std::cerr << "violation [" << v.code << "] tick " << v.tick << " " << v.subject << ": "
                << v.detail << "\n";
    }
    return 2;
  }
  return 0;
}

int cmd_route(const std::string& path, const std::string& from, const std::string& to) {
  try {
    Scenario sc = load_scenario(path);
    ElementId src = parse_address(from);
    ElementId dst = parse_address(to);
    InterzoneGraph ig = derive_interzone(sc.world);

    PlanConstraints c;
    c.profile = PerformanceProfile{true, true, 1e9, 1e9, "", 0};
    c.use_performance = false;
    c.use_access = false;

    std::string src_zone = src.zones.front();
    std::string dst_zone = dst.zones.front();
    const ZoneGraph& zg = sc.world.at(src_zone);

    if (src.in_zone(dst_zone) || dst.in_zone(src_zone)) {
      Pathway p = plan_pathway(zg, src, dst, c, 0);
      std::cout << "pathway (" << p.length_m << " m):";
      std::cout << " " << p.src.str();
      for (const auto& el : p.elements) std::cout << " " << el.str();
      std::cout << " " << p.dst.str() << "\n";
      if (!p.contingency.local.empty())
        std::cout << "contingency: " << p.contingency.str() << "\n";
      return 0;
    }

    std::vector<ElementId> route = plan_route(ig, src_zone, dst_zone, {}, 0);
    std::cout << "route:";
    for (const auto& g : route) std::cout << " " << g.str();
    std::cout << "\n";
    if (!route.empty()) {
      Pathway leg = plan_pathway(zg, src, route.front(), c, 0);
      std::cout << "first leg (" << leg.length_m << " m):";
      std::cout << " " << leg.src.str();
      for (const auto& el : leg.elements) std::cout << " " << el.str();
      std::cout << " " << leg.dst.str() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "route failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_stats(const std::string& path) {
  try {
    std::ifstream f(path);
    if (!f) {
      std::cerr << "cannot open " << path << "\n";
      return 1;
    }
    auto events = read_trace(f);
    MetricsSummary s = stats(events);
    std::cout << "events " << events.size() << "\n";
    std::cout << "trips completed " << s.completed_trips() << "\n";
    std::cout << "groundings " << s.groundings() << ", holdings " << s.holdings()
              << " (wait events " << s.wait_events() << "), denials " << s.denials() << "\n";
    std::cout << "messages " << s.messages_total << ", dropped " << s.messages_dropped << "\n";
    for (const auto& [drone, m] : s.per_drone)
      std::cout << "  " << drone << ": trips " << m.trips_completed << ", time " << m.trip_time
                << ", handoffs " << m.handoffs << " (failed " << m.failed_handoffs << "), sos "
                << m.sos << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "stats failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_reservations(const std::string& path, RunOverrides ov) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const Error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
  Engine engine(std::move(sc), ov);
  engine.run();
  std::cout << "reservation tables at tick " << engine.scenario().sim.ticks << "\n";
  for (const auto& z : engine.scenario().zsps) {
    const ReservationTable& table = engine.zsp(z.zsp_id).reservations();
    std::cout << z.zsp_id << " (" << z.zone << "): " << table.all().size() << " drones\n";
    for (const auto& [drone, rs] : table.all())
      for (const auto& r : rs)
        std::cout << "  " << drone << "  " << r.element.str() << "  ticks [" << r.eta_lo << ", "
                  << r.eta_hi << "]  weight " << r.weight << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"internet-of-drones airspace simulator"};
  app.require_subcommand(1);

  std::string scenario_path, trace_out, metrics_out, from, to, trace_path;
  RunOverrides ov;
  std::optional<std::uint64_t> seed;
  std::optional<long long> ticks;
  std::optional<double> loss;
  bool no_admission = false;

  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("scenario", scenario_path)->required();

  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("scenario", scenario_path)->required();
  run->add_option("--seed", seed, "override scenario seed");
  run->add_option("--ticks", ticks, "override tick count");
  run->add_option("--out", trace_out, "trace output path (jsonl)");
  run->add_option("--metrics", metrics_out, "metrics CSV path");
  run->add_option("--loss", loss, "message loss probability [0,1)");
  run->add_flag("--no-admission", no_admission, "disable admission control");

  auto* route = app.add_subcommand("route", "print pathway/route between elements");
  route->add_option("scenario", scenario_path)->required();
  route->add_option("--from", from)->required();
  route->add_option("--to", to)->required();

  auto* stats_cmd = app.add_subcommand("stats", "recompute metrics from a trace");
  stats_cmd->add_option("trace", trace_path)->required();

  auto* resv = app.add_subcommand("reservations", "run and dump per-ZSP reservation tables");
  resv->add_option("scenario", scenario_path)->required();
  resv->add_option("--seed", seed, "override scenario seed");
  resv->add_option("--at", ticks, "stop and dump at this tick");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(scenario_path);
  if (run->parsed()) {
    if (seed) ov.seed = *seed;
    if (ticks) ov.ticks = static_cast<iod::Tick>(*ticks);
    if (loss) ov.loss = *loss;
    if (no_admission) ov.admission = false;
    return cmd_run(scenario_path, ov, trace_out, metrics_out);
  }
  if (route->parsed()) return cmd_route(scenario_path, from, to);
  if (stats_cmd->parsed()) return cmd_stats(trace_path);
  if (resv->parsed()) {
    if (seed) ov.seed = *seed;
    if (ticks) ov.ticks = static_cast<iod::Tick>(*ticks);
    return cmd_reservations(scenario_path, ov);
  }
  return 1;
}
