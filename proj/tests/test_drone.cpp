#include <catch2/catch_amalgamated.hpp>

#include "iod/drone.hpp"
#include "iod/trace_check.hpp"

using namespace iod;

TEST_CASE("fuel rule thresholds on estimated time to contingency") {
  CHECK(check_fuel(90, 100) == FuelAction::Sos);
  CHECK(check_fuel(100, 100) == FuelAction::Refuel);   // boundary: not yet an emergency
  CHECK(check_fuel(140, 100) == FuelAction::Refuel);
  CHECK(check_fuel(149.9, 100) == FuelAction::Refuel);
  CHECK(check_fuel(150, 100) == FuelAction::None);     // exactly 1.5x is comfortable
  CHECK(check_fuel(160, 100) == FuelAction::None);
  CHECK(check_fuel(0, 0) == FuelAction::None);         // landed at the contingency
}

TEST_CASE("zsp choice prefers low congestion, then the smaller id") {
  auto ad = [](const std::string& id, double congestion) {
    ZspAdvertisement a;
    a.zsp_id = id;
    a.congestion = congestion;
    return a;
  };
  CHECK(choose_zsp({ad("zsp-b", 0.5), ad("zsp-a", 0.1)}) == "zsp-a");
  CHECK(choose_zsp({ad("zsp-b", 0.3), ad("zsp-a", 0.3)}) == "zsp-a");
  CHECK(choose_zsp({ad("zsp-b", 0.3), ad("zsp-c", 0.1)}) == "zsp-c");
  CHECK_THROWS_AS(choose_zsp({}), Error);
}

TEST_CASE("airborne modes are exactly the four in-flight states") {
  for (const char* m : {"airborne", "holding", "landing", "emergency"}) CHECK(airborne_mode(m));
  for (const char* m : {"grounded", "landed", "failed", "cruise", ""}) CHECK_FALSE(airborne_mode(m));
}

TEST_CASE("mode transition table") {
  auto ok = detail::transition_allowed;
  // self transitions and failure are always available
  for (const char* m : {"grounded", "airborne", "holding", "landing", "emergency", "landed"}) {
    CHECK(ok(m, m));
    CHECK(ok(m, "failed"));
  }
  CHECK(ok("failed", "failed"));  // terminal but idempotent
  CHECK_FALSE(ok("failed", "grounded"));

  CHECK(ok("grounded", "airborne"));
  CHECK(ok("grounded", "landed"));
  CHECK_FALSE(ok("grounded", "holding"));

  CHECK(ok("airborne", "holding"));
  CHECK(ok("airborne", "landing"));
  CHECK(ok("airborne", "emergency"));
  CHECK_FALSE(ok("airborne", "grounded"));  // must land first
  CHECK_FALSE(ok("airborne", "landed"));

  CHECK(ok("holding", "airborne"));
  CHECK(ok("holding", "landing"));
  CHECK(ok("holding", "emergency"));

  CHECK(ok("landing", "landed"));
  CHECK(ok("landing", "grounded"));
  CHECK_FALSE(ok("landing", "airborne"));

  CHECK(ok("emergency", "landed"));
  CHECK_FALSE(ok("emergency", "airborne"));  // no recovery mid-emergency

  CHECK(ok("landed", "grounded"));
  CHECK_FALSE(ok("landed", "airborne"));  // must re-enter the ground cycle
}
