#pragma once

#include <span>
#include <vector>

#include "nest/geometry.hpp"

namespace nest {

/// A disc inscribed in a shape's interior.
struct Pole {
  Point center;
  double radius = 0.0;

  friend bool operator==(const Pole&, const Pole&) = default;
};

/// Inscribed discs in descending radius order; the first is the pole of
/// inaccessibility.
using PoleSet = std::vector<Pole>;

/// r_a + r_b - |c_a - c_b|; negative when the discs are apart.
inline double penetration_depth(const Pole& a, const Pole& b) {
  return a.radius + b.radius - distance(a.center, b.center);
}

inline constexpr int kMaxPoles = 16;

/// Simple polygon with optional holes plus the derived data the solver reads
/// on every query: hull, diameter, poles, bounding box and shape penalty.
///
/// Rings are normalized at construction: consecutive duplicates removed,
/// outer counterclockwise, holes clockwise. The derived scalars (area,
/// diameter, penalty) describe the base shape and are carried unchanged by
/// rigid transformations.
class Polygon {
 public:
  Polygon() = default;

  /// Validates and normalizes the rings, then computes hull, diameter, poles
  /// and penalty. Throws GeometryError on fewer than three vertices, zero
  /// area, non-finite coordinates or self-intersection.
  static Polygon create(Ring outer, std::vector<Ring> holes = {}, int max_poles = kMaxPoles);

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }
  const Ring& convex_hull() const { return hull_; }
  const PoleSet& poles() const { return poles_; }
  const BBox& bbox() const { return bbox_; }
  double area() const { return area_; }
  double hull_area() const { return hull_area_; }
  double diameter() const { return diameter_; }
  double penalty_lambda() const { return penalty_lambda_; }

  /// Overwrites this polygon with `base` moved by `t`, reusing storage.
  void assign_transformed(const Polygon& base, const Transformation& t);

 private:
  Ring outer_;
  std::vector<Ring> holes_;
  Ring hull_;
  PoleSet poles_;
  BBox bbox_;
  double area_ = 0.0;
  double hull_area_ = 0.0;
  double diameter_ = 0.0;
  double penalty_lambda_ = 0.0;
};

/// Returns `shape` moved by `t`. Poles move with the shape; area, diameter
/// and penalty are unchanged.
Polygon transform(const Polygon& shape, const Transformation& t);

/// Shoelace area of the outer ring minus the holes.
double shoelace_area(const Polygon& shape);

/// Interior test for the polygon with holes (even-odd per ring).
bool point_in_polygon(Point p, const Polygon& shape);

/// Distance from `p` to the nearest edge of any ring.
double distance_to_boundary(Point p, const Polygon& shape);

/// Removes consecutive duplicates (including last == first) and fixes the
/// winding to the requested orientation.
Ring normalize_ring(Ring ring, bool counterclockwise);

}  // namespace nest
