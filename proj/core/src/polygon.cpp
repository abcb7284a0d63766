#include "nest/polygon.hpp"

#include <algorithm>
#include <cmath>

#include "nest/poles.hpp"

namespace nest {

Ring normalize_ring(Ring ring, bool counterclockwise) {
  Ring out;
  out.reserve(ring.size());
  for (const Point& p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if ((signed_area(out) > 0.0) != counterclockwise) std::reverse(out.begin(), out.end());
  return out;
}

namespace {

void require_finite(const Ring& ring) {
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw GeometryError("polygon has a non-finite coordinate");
    }
  }
}

bool rings_cross(const Ring& a, const Ring& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point p = a[i];
    const Point q = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_intersect(p, q, b[j], b[(j + 1) % b.size()])) return true;
    }
  }
  return false;
}

void transform_ring(const Ring& src, const Transformation& t, Ring& dst) {
  dst.resize(src.size());
  if (t.reflected) {
    // A mirror flips the winding; walking the source backwards restores it.
    const std::size_t n = src.size();
    for (std::size_t i = 0; i < n; ++i) dst[i] = t.apply(src[n - 1 - i]);
  } else {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = t.apply(src[i]);
  }
}

}  // namespace

Polygon Polygon::create(Ring outer, std::vector<Ring> holes, int max_poles) {
  require_finite(outer);
  for (const Ring& h : holes) require_finite(h);

  Polygon poly;
  poly.outer_ = normalize_ring(std::move(outer), true);
  if (poly.outer_.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (ring_self_intersects(poly.outer_)) throw GeometryError("polygon has a self-intersection");

  for (Ring& h : holes) {
    Ring ring = normalize_ring(std::move(h), false);
    if (ring.size() < 3) throw GeometryError("hole needs at least 3 vertices");
    if (ring_self_intersects(ring)) throw GeometryError("hole has a self-intersection");
    if (rings_cross(ring, poly.outer_)) throw GeometryError("hole crosses the outer boundary (self-intersection)");
    if (!point_in_ring(ring.front(), poly.outer_)) throw GeometryError("hole lies outside the outer boundary");
    for (const Ring& other : poly.holes_) {
      if (rings_cross(ring, other)) throw GeometryError("holes intersect each other (self-intersection)");
    }
    poly.holes_.push_back(std::move(ring));
  }

  poly.area_ = shoelace_area(poly);
  if (!(poly.area_ > 0.0)) throw GeometryError("polygon has zero area");

  poly.hull_ = nest::convex_hull(poly.outer_);
  poly.hull_area_ = signed_area(poly.hull_);
  poly.diameter_ = hull_diameter(poly.hull_);
  poly.penalty_lambda_ = std::sqrt(poly.hull_area_);
  poly.bbox_ = BBox::of(poly.outer_);

  PoleOptions options;
  options.max_poles = max_poles;
  poly.poles_ = compute_poles(poly.outer_, poly.holes_, poly.diameter_, options);
  return poly;
}

void Polygon::assign_transformed(const Polygon& base, const Transformation& t) {
  transform_ring(base.outer_, t, outer_);
  holes_.resize(base.holes_.size());
  for (std::size_t i = 0; i < holes_.size(); ++i) transform_ring(base.holes_[i], t, holes_[i]);
  transform_ring(base.hull_, t, hull_);
  poles_.resize(base.poles_.size());
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    poles_[i] = Pole{t.apply(base.poles_[i].center), base.poles_[i].radius};
  }
  bbox_ = BBox::of(outer_);
  area_ = base.area_;
  hull_area_ = base.hull_area_;
  diameter_ = base.diameter_;
  penalty_lambda_ = base.penalty_lambda_;
}

Polygon transform(const Polygon& shape, const Transformation& t) {
  Polygon out;
  out.assign_transformed(shape, t);
  return out;
}

double shoelace_area(const Polygon& shape) {
  double a = std::abs(signed_area(shape.outer()));
  for (const Ring& h : shape.holes()) a -= std::abs(signed_area(h));
  return a;
}

bool point_in_polygon(Point p, const Polygon& shape) {
  if (!point_in_ring(p, shape.outer())) return false;
  for (const Ring& h : shape.holes()) {
    if (point_in_ring(p, h)) return false;
  }
  return true;
}

double distance_to_boundary(Point p, const Polygon& shape) {
  auto ring_distance = [p](const Ring& ring) {
    double best = INFINITY;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      best = std::min(best, point_segment_distance(p, ring[j], ring[i]));
    }
    return best;
  };
  double d = ring_distance(shape.outer());
  for (const Ring& h : shape.holes()) d = std::min(d, ring_distance(h));
  return d;
}

}  // namespace nest
