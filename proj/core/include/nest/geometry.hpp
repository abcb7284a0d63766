#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nest {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

using Ring = std::vector<Point>;

/// Axis-aligned bounding box. Default-constructed boxes are empty.
struct BBox {
  double min_x = INFINITY;
  double min_y = INFINITY;
  double max_x = -INFINITY;
  double max_y = -INFINITY;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool empty() const { return min_x > max_x || min_y > max_y; }

  void expand(Point p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }

  /// Closed-interval overlap, with both boxes inflated by `margin`.
  bool overlaps(const BBox& o, double margin = 0.0) const {
    return min_x <= o.max_x + margin && o.min_x <= max_x + margin &&
           min_y <= o.max_y + margin && o.min_y <= max_y + margin;
  }

  static BBox of(std::span<const Point> pts) {
    BBox b;
    for (const Point& p : pts) b.expand(p);
    return b;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Rigid motion: optional mirror in the y axis (x -> -x), then a rotation
/// by `theta` about the origin, then a translation by (dx, dy).
struct Transformation {
  double dx = 0.0;
  double dy = 0.0;
  double theta = 0.0;
  bool reflected = false;

  Point apply(Point p) const {
    const double x = reflected ? -p.x : p.x;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * x - s * p.y + dx, s * x + c * p.y + dy};
  }

  Point apply_inverse(Point p) const {
    const double x = p.x - dx;
    const double y = p.y - dy;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double rx = c * x + s * y;
    const double ry = -s * x + c * y;
    return {reflected ? -rx : rx, ry};
  }

  /// Rotation and reflection only.
  Transformation linear_part() const { return {0.0, 0.0, theta, reflected}; }

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Wraps an angle into [0, 2*pi).
double normalize_angle(double theta);

inline double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
inline double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Signed shoelace area; positive for counterclockwise rings.
double signed_area(std::span<const Point> ring);

/// Counterclockwise convex hull (Andrew's monotone chain) without collinear
/// vertices. Throws GeometryError when fewer than three non-collinear points exist.
Ring convex_hull(std::span<const Point> points);

/// Largest distance between any two vertices of a convex hull.
double hull_diameter(std::span<const Point> hull);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// Closed-segment intersection test (touching counts), exact orientation signs.
bool segments_intersect(Point a, Point b, Point c, Point d);

/// True when the closed segments intersect or come within `eps` of each other.
bool segments_within(Point a, Point b, Point c, Point d, double eps);

/// Even-odd point-in-ring test. Points on the boundary may go either way.
bool point_in_ring(Point p, std::span<const Point> ring);

/// True when two non-adjacent edges of the ring intersect, or adjacent edges
/// overlap beyond their shared vertex.
bool ring_self_intersects(std::span<const Point> ring);

}  // namespace nest
