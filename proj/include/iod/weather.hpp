#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "iod/geometry.hpp"

namespace iod {

using Tick = std::int64_t;

struct WeatherReport {
  std::string zone;
  Point wind;  // m/s vector
  double temperature = 20;
  Tick valid_until = 0;

  double wind_speed() const { return norm(wind); }
};

// scenario-driven weather: piecewise-constant phases per zone
struct WeatherPhase {
  std::string zone;
  Tick from = 0;
  Tick to = std::numeric_limits<Tick>::max();  // exclusive
  Point wind;
  double temperature = 20;
};

struct WeatherTimeline {
  std::vector<WeatherPhase> phases;

  // calm defaults when no phase matches; later phases win overlaps
  WeatherReport at(const std::string& zone, Tick now) const {
    WeatherReport r;
    r.zone = zone;
    r.valid_until = std::numeric_limits<Tick>::max();
    for (const auto& p : phases) {
      if (p.zone != zone) continue;
      if (now < p.from) {
        r.valid_until = std::min(r.valid_until, p.from);
        continue;
      }
      if (now >= p.to) continue;
      r.wind = p.wind;
      r.temperature = p.temperature;
      r.valid_until = p.to;
    }
    return r;
  }
};

}  // namespace iod
