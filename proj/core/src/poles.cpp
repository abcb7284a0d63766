#include "nest/poles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace nest {
namespace {

class ClearanceField {
 public:
  ClearanceField(std::span<const Point> outer, std::span<const Ring> holes) : outer_(outer), holes_(holes) {}

  void add_pole(const Pole& p) { poles_.push_back(p); }

  double operator()(Point p) const {
    bool inside = false;
    double d = INFINITY;
    scan(outer_, p, inside, d);
    for (const Ring& h : holes_) scan(h, p, inside, d);
    double value = inside ? d : -d;
    for (const Pole& pole : poles_) value = std::min(value, distance(p, pole.center) - pole.radius);
    return value;
  }

 private:
  static void scan(std::span<const Point> ring, Point p, bool& inside, double& d) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring[i];
      const Point& b = ring[j];
      if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
        inside = !inside;
      }
      d = std::min(d, point_segment_distance(p, a, b));
    }
  }

  std::span<const Point> outer_;
  std::span<const Ring> holes_;
  std::vector<Pole> poles_;
};

struct Cell {
  Point center;
  double half = 0.0;
  double value = 0.0;
  double bound = 0.0;

  Cell(Point c, double h, const ClearanceField& field)
      : center(c), half(h), value(field(c)), bound(value + h * std::numbers::sqrt2) {}
};

struct ByBound {
  bool operator()(const Cell& a, const Cell& b) const { return a.bound < b.bound; }
};

Point area_centroid(std::span<const Point> ring) {
  double a = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const double f = ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    cx += (ring[j].x + ring[i].x) * f;
    cy += (ring[j].y + ring[i].y) * f;
    a += 3.0 * f;
  }
  if (a == 0.0) return ring.front();
  return {cx / a, cy / a};
}

Cell best_clearance_point(const ClearanceField& field, const BBox& bounds, Point centroid, double precision) {
  const double cell_size = std::min(bounds.width(), bounds.height());
  std::priority_queue<Cell, std::vector<Cell>, ByBound> queue;
  const double h = cell_size / 2.0;
  for (double x = bounds.min_x; x < bounds.max_x; x += cell_size) {
    for (double y = bounds.min_y; y < bounds.max_y; y += cell_size) {
      queue.emplace(Point{x + h, y + h}, h, field);
    }
  }

  Cell best(centroid, 0.0, field);
  const Cell box_center(Point{bounds.min_x + bounds.width() / 2, bounds.min_y + bounds.height() / 2}, 0.0, field);
  if (box_center.value > best.value) best = box_center;

  while (!queue.empty()) {
    const Cell cell = queue.top();
    queue.pop();
    if (cell.value > best.value) best = cell;
    if (cell.bound - best.value <= precision) continue;
    const double q = cell.half / 2.0;
    queue.emplace(Point{cell.center.x - q, cell.center.y - q}, q, field);
    queue.emplace(Point{cell.center.x + q, cell.center.y - q}, q, field);
    queue.emplace(Point{cell.center.x - q, cell.center.y + q}, q, field);
    queue.emplace(Point{cell.center.x + q, cell.center.y + q}, q, field);
  }
  return best;
}

}  // namespace

PoleSet compute_poles(std::span<const Point> outer, std::span<const Ring> holes, double diameter,
                      const PoleOptions& options) {
  if (options.max_poles < 1 || options.max_poles > kMaxPoles) {
    throw GeometryError("pole count must be in [1, 16]");
  }
  if (outer.size() < 3 || !(std::abs(signed_area(outer)) > 0.0)) {
    throw GeometryError("cannot compute poles of a degenerate polygon");
  }
  const BBox bounds = BBox::of(outer);
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw GeometryError("cannot compute poles of a degenerate polygon");
  }
  const double precision = options.tolerance_ratio * diameter;
  const Point centroid = area_centroid(outer);

  ClearanceField field(outer, holes);
  PoleSet poles;
  while (static_cast<int>(poles.size()) < options.max_poles) {
    const Cell best = best_clearance_point(field, bounds, centroid, precision);
    if (!(best.value > 0.0)) break;
    if (!poles.empty() && best.value < options.min_radius_ratio * poles.front().radius) break;
    const Pole pole{best.center, best.value};
    poles.push_back(pole);
    field.add_pole(pole);
  }
  if (poles.empty()) throw GeometryError("polygon has no interior to place a pole in");
  // Grid tolerance can let a later pole edge past an earlier one.
  std::stable_sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.radius > b.radius; });
  return poles;
}

PoleSet compute_poles(const Polygon& shape, int max_poles) {
  PoleOptions options;
  options.max_poles = max_poles;
  return compute_poles(shape.outer(), shape.holes(), shape.diameter(), options);
}

}  // namespace nest
