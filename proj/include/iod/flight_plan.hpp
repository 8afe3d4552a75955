#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "iod/errors.hpp"
#include "iod/planning.hpp"
#include "iod/zone_graph.hpp"

namespace iod {

// Arc interval of the concatenated centerline owned by one pathway element.
struct ChainSpan {
  ElementId element;
  double lo = 0, hi = 0;
};

// Geometric realization of a pathway: the airway centerlines concatenated
// into one polyline, partitioned into contiguous arc spans. A vertex owns the
// part of the polyline inside its own geometry (found by bisecting the
// containment transition), airways own the gaps between vertices. Labeling a
// drone's element from its arc therefore keeps position-in-element
// containment true by construction.
class FlightChain {
 public:
  static FlightChain build(const ZoneGraph& graph, const Pathway& pathway) {
    std::vector<ElementId> chain;
    chain.push_back(pathway.src);
    for (const auto& e : pathway.elements) chain.push_back(e);
    if (!(pathway.dst == chain.back())) chain.push_back(pathway.dst);

    FlightChain fc;
    fc.chain_ = chain;

    // concatenated polyline from the airway centerlines
    std::vector<double> joints;  // arc of each vertex center, ordered as in chain
    for (const auto& id : chain) {
      const Element* e = graph.find(id);
      if (!e) raise(Errc::UnknownElement, id.str());
      if (id.kind != ElementKind::Airway) {
        if (fc.poly_.empty()) fc.poly_.push_back(center_of(e->geometry));
        joints.push_back(fc.total_);
        continue;
      }
      const auto& line = std::get<Corridor>(e->geometry).centerline;
      std::size_t start = 0;
      if (!fc.poly_.empty() && fc.poly_.back() == line.front()) start = 1;
      if (fc.poly_.empty()) {
        fc.poly_.push_back(line.front());
        start = 1;
      }
      for (std::size_t i = start; i < line.size(); ++i) {
        fc.total_ += distance(fc.poly_.back(), line[i]);
        fc.poly_.push_back(line[i]);
      }
    }
    fc.cum_.resize(fc.poly_.size());
    fc.cum_[0] = 0;
    for (std::size_t i = 1; i < fc.poly_.size(); ++i)
      fc.cum_[i] = fc.cum_[i - 1] + distance(fc.poly_[i - 1], fc.poly_[i]);
    if (!fc.cum_.empty()) fc.total_ = fc.cum_.back();

    // vertex spans around their joint arcs, clipped against neighbors
    std::vector<ChainSpan> vertex_spans;
    std::size_t joint_idx = 0;
    for (std::size_t ci = 0; ci < chain.size(); ++ci) {
      if (chain[ci].kind == ElementKind::Airway) continue;
      const Element* e = graph.find(chain[ci]);
      const double joint = joints[joint_idx];
      const double lo_limit = joint_idx == 0 ? 0 : joints[joint_idx - 1];
      const double hi_limit = joint_idx + 1 < joints.size() ? joints[joint_idx + 1] : fc.total_;
      double lo = ci == 0 ? 0 : fc.find_boundary(e->geometry, joint, lo_limit);
      double hi = ci + 1 == chain.size() ? fc.total_ : fc.find_boundary(e->geometry, joint, hi_limit);
      vertex_spans.push_back({chain[ci], lo, hi});
      ++joint_idx;
    }
    // no overlap between consecutive vertex claims
    for (std::size_t i = 1; i < vertex_spans.size(); ++i) {
      if (vertex_spans[i].lo < vertex_spans[i - 1].hi) {
        double mid = 0.5 * (vertex_spans[i].lo + vertex_spans[i - 1].hi);
        vertex_spans[i - 1].hi = mid;
        vertex_spans[i].lo = mid;
      }
    }
    // interleave airway spans into the gaps
    std::size_t vi = 0;
    for (std::size_t ci = 0; ci < chain.size(); ++ci) {
      if (chain[ci].kind != ElementKind::Airway) {
        fc.spans_.push_back(vertex_spans[vi++]);
        continue;
      }
      double lo = fc.spans_.empty() ? 0 : fc.spans_.back().hi;
      double hi = vi < vertex_spans.size() ? vertex_spans[vi].lo : fc.total_;
      fc.spans_.push_back({chain[ci], lo, std::max(lo, hi)});
    }
    return fc;
  }

  double total() const { return total_; }
  const std::vector<Point>& polyline() const { return poly_; }
  const std::vector<ChainSpan>& spans() const { return spans_; }
  const std::vector<ElementId>& elements() const { return chain_; }

  Point point_at(double arc) const {
    if (poly_.size() == 1 || arc <= 0) return poly_.front();
    if (arc >= total_) return poly_.back();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), arc);
    std::size_t hi = std::min<std::size_t>(it - cum_.begin(), poly_.size() - 1);
    std::size_t lo = hi - 1;
    double seg = cum_[hi] - cum_[lo];
    double t = seg > 0 ? (arc - cum_[lo]) / seg : 0;
    return poly_[lo] + (poly_[hi] - poly_[lo]) * t;
  }

  // Span owning this arc. Boundaries belong to the later span so a drone
  // "enters" the next element exactly when its arc reaches the span edge.
  const ChainSpan& span_at(double arc) const {
    for (std::size_t i = spans_.size(); i-- > 0;) {
      if (spans_[i].lo >= spans_[i].hi && !(arc == spans_[i].lo && arc == total_))
        continue;  // skip empty spans except a terminal point span
      if (arc >= spans_[i].lo) return spans_[i];
    }
    return spans_.front();
  }

  std::optional<std::size_t> span_index(const ElementId& id) const {
    for (std::size_t i = 0; i < spans_.size(); ++i)
      if (spans_[i].element == id) return i;
    return std::nullopt;
  }

 private:
  // arc in [min(joint,limit), max(joint,limit)] where the polyline crosses
  // the shape boundary; the point at `joint` is inside
  double find_boundary(const Geometry& shape, double joint, double limit) const {
    double step = joint < limit ? 1.0 : -1.0;
    double inside = joint, outside = limit;
    bool found_outside = false;
    for (double a = joint + step; step > 0 ? a < limit : a > limit; a += step) {
      if (!contains(shape, point_at(a))) {
        outside = a;
        found_outside = true;
        break;
      }
      inside = a;
    }
    if (!found_outside) {
      if (contains(shape, point_at(limit))) return limit;  // shape swallows the gap
      outside = limit;
    }
    for (int i = 0; i < 64; ++i) {
      double mid = 0.5 * (inside + outside);
      if (contains(shape, point_at(mid)))
        inside = mid;
      else
        outside = mid;
    }
    return 0.5 * (inside + outside);
  }

  std::vector<ElementId> chain_;
  std::vector<Point> poly_;
  std::vector<double> cum_;
  std::vector<ChainSpan> spans_;
  double total_ = 0;
};

// equal ≤ max_step sampling of [0, length] including both ends
inline std::vector<double> sample_arcs(double length, double max_step = 25) {
  std::vector<double> arcs;
  if (length <= 0) return {0};
  int steps = std::max(1, static_cast<int>(std::ceil(length / max_step)));
  for (int i = 0; i <= steps; ++i) arcs.push_back(length * i / steps);
  return arcs;
}

// Executable point sequence for one pathway element: full centerline for
// airways, the entry-to-exit stretch of the chain for vertices. One target
// speed per waypoint.
struct Trajectory {
  ElementId element;
  std::vector<Point> waypoints;
  std::vector<double> speeds;
};

inline Trajectory make_trajectory(const ZoneGraph& graph, const Pathway& pathway,
                                  const ElementId& element, const PerformanceProfile& profile) {
  if (!pathway.covers(element)) raise(Errc::NotOnPathway, element.str());
  const Element* e = graph.find(element);
  if (!e) raise(Errc::UnknownElement, element.str());
  double speed = profile.max_speed;
  if (auto lim = e->meta.speed_limit()) speed = std::min(speed, *lim);

  Trajectory t;
  t.element = element;
  if (element.kind == ElementKind::Airway) {
    const auto& line = std::get<Corridor>(e->geometry).centerline;
    double len = polyline_length(line);
    FlightChain chain;  // reuse arc sampling over just this centerline
    Pathway single;
    single.src = *e->meta.from;
    single.dst = *e->meta.to;
    single.elements = {element};
    chain = FlightChain::build(graph, single);
    for (double a : sample_arcs(len)) t.waypoints.push_back(chain.point_at(a));
  } else {
    FlightChain chain = FlightChain::build(graph, pathway);
    auto idx = chain.span_index(element);
    if (!idx) raise(Errc::NotOnPathway, element.str());
    const ChainSpan& span = chain.spans()[*idx];
    for (double a : sample_arcs(span.hi - span.lo)) t.waypoints.push_back(chain.point_at(span.lo + a));
  }
  t.speeds.assign(t.waypoints.size(), speed);
  return t;
}

}  // namespace iod
