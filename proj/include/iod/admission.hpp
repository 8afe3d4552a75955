#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iod/element.hpp"

namespace iod {

using Tick = std::int64_t;

// Probability-weighted, time-windowed claim on one element of a planned trip.
struct Reservation {
  std::string drone_id;
  ElementId element;
  Tick eta_lo = 0, eta_hi = 0;  // inclusive window
  double weight = 1.0;          // (0,1]

  bool covers(Tick t) const { return eta_lo <= t && t <= eta_hi; }
};

struct AdmissionParams {
  double rho = 0.8;        // per-element weight decay
  double sigma_frac = 0.2; // window halfwidth as fraction of cumulative ETA
  Tick sigma_min = 2;
  int horizon_zones = 2;   // current zone plus one ahead
  Tick max_delay = 300;    // deny-delay search cap
};

// One element of the trip ahead, as seen by shadow_reserve. zone_index 0 is
// the zone the trip starts in, 1 the next zone on the route, and so on.
struct ReserveElement {
  ElementId element;
  double length = 0;       // vertices contribute 0
  double speed_limit = 0;  // 0 = unlimited
  int zone_index = 0;
};

// Reservations for the elements ahead: the i-th element ahead carries weight
// rho^i; its window is the cumulative ETA plus/minus sigma = max(sigma_min,
// sigma_frac x ETA). Elements at or beyond the zone horizon are not reserved.
inline std::vector<Reservation> shadow_reserve(const std::string& drone_id,
                                               const std::vector<ReserveElement>& ahead,
                                               Tick start_tick, const PerformanceProfile& profile,
                                               const AdmissionParams& p = {},
                                               double initial_weight = 1.0) {
  std::vector<Reservation> out;
  double eta = 0;  // ticks of travel before reaching element i
  double weight = initial_weight;
  for (const auto& el : ahead) {
    if (el.zone_index >= p.horizon_zones) break;
    double speed = profile.max_speed;
    if (el.speed_limit > 0) speed = std::min(speed, el.speed_limit);
    if (speed <= 0) speed = 1;
    double sigma = std::max(static_cast<double>(p.sigma_min), p.sigma_frac * eta);
    Reservation r;
    r.drone_id = drone_id;
    r.element = el.element;
    r.eta_lo = start_tick + static_cast<Tick>(std::floor(eta - sigma));
    r.eta_hi = start_tick + static_cast<Tick>(std::ceil(eta + sigma));
    r.weight = weight;
    out.push_back(r);
    eta += el.length / speed;
    weight *= p.rho;
  }
  return out;
}

using CapacityFn = std::function<std::optional<int>(const ElementId&)>;

// Per-ZSP reservation ledger. Holds this ZSP's own grants plus entries other
// ZSPs shared for elements of this zone; lookups are by element and tick.
class ReservationTable {
 public:
  void replace(const std::string& drone_id, std::vector<Reservation> rs) {
    by_drone_[drone_id] = std::move(rs);
    reindex();
  }

  void erase(const std::string& drone_id) {
    by_drone_.erase(drone_id);
    reindex();
  }

  const std::vector<Reservation>* of(const std::string& drone_id) const {
    auto it = by_drone_.find(drone_id);
    return it == by_drone_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, std::vector<Reservation>>& all() const { return by_drone_; }

  // weighted load on an element at a tick, optionally ignoring one drone
  double load(const ElementId& element, Tick t, const std::string& exclude = {}) const {
    double sum = 0;
    auto it = by_element_.find(element);
    if (it == by_element_.end()) return 0;
    for (const Reservation* r : it->second)
      if (r->covers(t) && r->drone_id != exclude) sum += r->weight;
    return sum;
  }

  // Admit iff every candidate window tick keeps weighted load within
  // capacity. Elements with unknown capacity (foreign zone) are skipped; the
  // ZSP owning them checks its own copy.
  bool admits(const std::vector<Reservation>& candidate, const CapacityFn& capacity,
              Tick shift = 0) const {
    for (const auto& r : candidate) {
      auto cap = capacity(r.element);
      if (!cap) continue;
      for (Tick t = r.eta_lo + shift; t <= r.eta_hi + shift; ++t)
        if (load(r.element, t, r.drone_id) + r.weight > *cap + 1e-9) return false;
    }
    return true;
  }

  // Smallest start-tick shift in [1, max_delay] whose shifted windows all
  // admit; nullopt if none does. Windows shift rigidly because sigma depends
  // only on travel time, not on the start tick.
  std::optional<Tick> first_admitting_shift(const std::vector<Reservation>& candidate,
                                            const CapacityFn& capacity,
                                            const AdmissionParams& p = {}) const {
    for (Tick d = 1; d <= p.max_delay; ++d)
      if (admits(candidate, capacity, d)) return d;
    return std::nullopt;
  }

 private:
  void reindex() {
    by_element_.clear();
    for (const auto& [id, rs] : by_drone_)
      for (const auto& r : rs) by_element_[r.element].push_back(&r);
  }

  std::map<std::string, std::vector<Reservation>> by_drone_;
  std::map<ElementId, std::vector<const Reservation*>> by_element_;
};

}  // namespace iod
