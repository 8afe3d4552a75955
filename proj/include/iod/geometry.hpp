#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

namespace iod {

// Local Cartesian frame, meters: x east, y north, z altitude above ground.
struct Point {
  double x = 0, y = 0, z = 0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y, s * p.z}; }
  friend Point operator*(Point p, double s) { return s * p; }
  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool finite(Point p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Tube of given radius around a polyline centerline (airways).
struct Corridor {
  std::vector<Point> centerline;  // >= 2 points
  double radius = 0;
};

// Intersections and gates.
struct Sphere {
  Point center;
  double radius = 0;
};

// Nodes: axis-aligned box, free flight inside.
struct Box {
  Point min, max;
};

using Geometry = std::variant<Corridor, Sphere, Box>;

inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

inline double polyline_length(const std::vector<Point>& pts) {
  double len = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

// Point on the polyline at arc length s (clamped to the ends).
inline Point point_at_arc(const std::vector<Point>& pts, double s) {
  if (pts.empty()) return {};
  if (s <= 0) return pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double seg = distance(pts[i - 1], pts[i]);
    if (s <= seg) {
      if (seg == 0) return pts[i];
      return pts[i - 1] + (s / seg) * (pts[i] - pts[i - 1]);
    }
    s -= seg;
  }
  return pts.back();
}

// Arc length of the closest centerline point to p (for progress estimation).
inline double arc_of_closest(const std::vector<Point>& pts, Point p) {
  double best_d = std::numeric_limits<double>::infinity();
  double best_arc = 0, acc = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Point ab = pts[i] - pts[i - 1];
    const double len2 = dot(ab, ab);
    double t = len2 == 0 ? 0.0 : std::clamp(dot(p - pts[i - 1], ab) / len2, 0.0, 1.0);
    const double d = distance(p, pts[i - 1] + t * ab);
    const double seg = std::sqrt(len2);
    if (d < best_d) {
      best_d = d;
      best_arc = acc + t * seg;
    }
    acc += seg;
  }
  return best_arc;
}

// Tolerance for boundary membership; absorbs interpolation round-off when a
// position lands exactly on a shape surface.
inline constexpr double kGeomEps = 1e-6;

inline bool contains(const Corridor& c, Point p) {
  for (std::size_t i = 1; i < c.centerline.size(); ++i)
    if (segment_distance(p, c.centerline[i - 1], c.centerline[i]) <= c.radius + kGeomEps)
      return true;
  return false;
}

inline bool contains(const Sphere& s, Point p) {
  return distance(s.center, p) <= s.radius + kGeomEps;
}

inline bool contains(const Box& b, Point p) {
  return p.x >= b.min.x - kGeomEps && p.x <= b.max.x + kGeomEps &&
         p.y >= b.min.y - kGeomEps && p.y <= b.max.y + kGeomEps &&
         p.z >= b.min.z - kGeomEps && p.z <= b.max.z + kGeomEps;
}

// Boundary inclusive on all shapes.
inline bool contains(const Geometry& g, Point p) {
  return std::visit([&](const auto& shape) { return contains(shape, p); }, g);
}

// Highest altitude reached by the shape (for the 152.4 m advisory check).
inline double top_altitude(const Geometry& g) {
  if (const auto* c = std::get_if<Corridor>(&g)) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& p : c->centerline) top = std::max(top, p.z + c->radius);
    return top;
  }
  if (const auto* s = std::get_if<Sphere>(&g)) return s->center.z + s->radius;
  return std::get<Box>(g).max.z;
}

inline Point center_of(const Geometry& g) {
  if (const auto* c = std::get_if<Corridor>(&g))
    return point_at_arc(c->centerline, polyline_length(c->centerline) / 2);
  if (const auto* s = std::get_if<Sphere>(&g)) return s->center;
  const auto& b = std::get<Box>(g);
  return {0.5 * (b.min.x + b.max.x), 0.5 * (b.min.y + b.max.y), 0.5 * (b.min.z + b.max.z)};
}

}  // namespace iod
