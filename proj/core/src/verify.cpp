#include "nest/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nest {

// Deliberately self-contained: no Polygon, poles, hull or spatial index.
namespace {

struct Box {
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
};

Box box_of(const Ring& r) {
  Box b;
  for (const Point& p : r) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

double cross2(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double seg_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * ab.x), p.y - (a.y + t * ab.y));
}

template <typename Fn>
void for_each_edge(const PlacedRings& p, Fn&& fn) {
  auto ring = [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) fn(r[i], r[(i + 1) % r.size()]);
  };
  ring(p.outer);
  for (const Ring& h : p.holes) ring(h);
}

bool crossing_parity(Point q, const Ring& r) {
  bool inside = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const Point a = r[j];
    const Point b = r[i];
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x) inside = !inside;
    }
  }
  return inside;
}

bool strictly_inside(Point q, const PlacedRings& p, double tol) {
  double d = INFINITY;
  for_each_edge(p, [&](Point a, Point b) { d = std::min(d, seg_distance(q, a, b)); });
  if (d <= tol) return false;
  bool inside = crossing_parity(q, p.outer);
  for (const Ring& h : p.holes) inside = inside != crossing_parity(q, h);
  return inside;
}

// True when some piece of a's boundary, split at every contact with b's
// boundary, lies strictly inside b.
bool boundary_enters(const PlacedRings& a, const PlacedRings& b, double tol) {
  bool hit = false;
  std::vector<double> ts;
  for_each_edge(a, [&](Point p, Point q) {
    if (hit) return;
    const Point pq = q - p;
    const double len = std::hypot(pq.x, pq.y);
    if (len == 0.0) return;
    ts.assign({0.0, 1.0});
    for_each_edge(b, [&](Point r, Point s) {
      const Point rs = s - r;
      const double denom = cross2(pq, rs);
      const double scale = len * std::hypot(rs.x, rs.y);
      if (std::abs(denom) > 1e-14 * scale) {
        const double t = cross2(r - p, rs) / denom;
        const double u = cross2(r - p, pq) / denom;
        if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) ts.push_back(t);
      } else if (std::abs(cross2(r - p, pq)) <= 1e-14 * scale + tol * len) {
        for (Point e : {r, s}) {
          const double t = ((e.x - p.x) * pq.x + (e.y - p.y) * pq.y) / (len * len);
          if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
      }
    });
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size() && !hit; ++k) {
      if (ts[k + 1] - ts[k] <= 0.0) continue;
      const double m = 0.5 * (ts[k] + ts[k + 1]);
      if (strictly_inside({p.x + m * pq.x, p.y + m * pq.y}, b, tol)) hit = true;
    }
  });
  return hit;
}

}  // namespace

Point interior_point(const PlacedRings& p) {
  const Box b = box_of(p.outer);
  // Off-center scanline so that it rarely passes through a vertex.
  const double y = b.y0 + (b.y1 - b.y0) * 0.5061803398874989;
  std::vector<double> xs;
  for_each_edge(p, [&](Point a, Point c) {
    if ((a.y > y) != (c.y > y)) xs.push_back(a.x + (y - a.y) * (c.x - a.x) / (c.y - a.y));
  });
  std::sort(xs.begin(), xs.end());
  double best = -1.0;
  Point out{0.5 * (b.x0 + b.x1), y};
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
    if (xs[k + 1] - xs[k] > best) {
      best = xs[k + 1] - xs[k];
      out = {0.5 * (xs[k] + xs[k + 1]), y};
    }
  }
  return out;
}

bool interiors_overlap(const PlacedRings& a, const PlacedRings& b, double tol) {
  const Box ba = box_of(a.outer);
  const Box bb = box_of(b.outer);
  if (ba.x1 <= bb.x0 + tol || bb.x1 <= ba.x0 + tol || ba.y1 <= bb.y0 + tol || bb.y1 <= ba.y0 + tol) return false;
  if (strictly_inside(interior_point(a), b, tol) || strictly_inside(interior_point(b), a, tol)) return true;
  return boundary_enters(a, b, tol) || boundary_enters(b, a, tol);
}

PlacedRings place_rings(const ItemType& type, const Transformation& t) {
  PlacedRings out;
  for (const Point& p : type.outer) out.outer.push_back(t.apply(p));
  for (const Ring& h : type.holes) {
    Ring r;
    for (const Point& p : h) r.push_back(t.apply(p));
    out.holes.push_back(std::move(r));
  }
  return out;
}

std::size_t VerifyReport::count(Violation::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::string VerifyReport::summary() const {
  std::ostringstream ss;
  ss << violations.size() << " violation(s)";
  for (std::size_t k = 0; k < violations.size() && k < 5; ++k) ss << "; " << violations[k].message;
  return ss.str();
}

VerifyReport verify_solution(const StripInstance& instance, const SolutionFile& solution) {
  VerifyReport report;
  auto add = [&](Violation::Kind kind, std::size_t a, std::size_t b, std::string msg) {
    report.violations.push_back({kind, a, b, std::move(msg)});
  };

  std::map<std::size_t, const ItemType*> types;
  std::map<std::size_t, int> placed_count;
  for (const ItemType& t : instance.items) types[t.id] = &t;

  const double height = solution.strip_height;
  const double length = solution.strip_length;
  const double tol = 1e-9 * std::max(length, height);

  if (!(height > 0.0 && length > 0.0)) add(Violation::Kind::containment, 0, 0, "strip dimensions must be positive");
  if (height > instance.strip_height * 1.0001 * (1.0 + 1e-12) || height < instance.strip_height * (1.0 - 1e-12)) {
    add(Violation::Kind::containment, 0, 0, "solution strip height differs from the instance");
  }

  std::vector<PlacedRings> rings;
  std::vector<std::size_t> index;
  double area = 0.0;
  for (std::size_t k = 0; k < solution.placements.size(); ++k) {
    const PlacementRecord& p = solution.placements[k];
    auto it = types.find(p.item_id);
    if (it == types.end()) {
      add(Violation::Kind::assignment, k, k, "placement " + std::to_string(k) + " has unknown item id " +
                                                 std::to_string(p.item_id));
      continue;
    }
    ++placed_count[p.item_id];
    PlacedRings r = place_rings(*it->second, p.t);
    double a = std::abs(signed_area(r.outer));
    for (const Ring& h : r.holes) a -= std::abs(signed_area(h));
    area += a;
    const Box b = box_of(r.outer);
    if (b.x0 < -tol || b.y0 < -tol || b.x1 > length + tol || b.y1 > height + tol) {
      add(Violation::Kind::containment, k, k,
          "placement " + std::to_string(k) + " (item " + std::to_string(p.item_id) + ") leaves the strip");
    }
    rings.push_back(std::move(r));
    index.push_back(k);
  }
  for (const ItemType& t : instance.items) {
    if (placed_count[t.id] != t.demand) {
      add(Violation::Kind::assignment, 0, 0,
          "item " + std::to_string(t.id) + " placed " + std::to_string(placed_count[t.id]) + " times, demand " +
              std::to_string(t.demand));
    }
  }

  for (std::size_t i = 0; i < rings.size(); ++i) {
    for (std::size_t j = i + 1; j < rings.size(); ++j) {
      if (interiors_overlap(rings[i], rings[j], tol)) {
        add(Violation::Kind::overlap, index[i], index[j],
            "placements " + std::to_string(index[i]) + " and " + std::to_string(index[j]) + " overlap");
      }
    }
  }

  report.density = (height > 0.0 && length > 0.0) ? 100.0 * area / (height * length) : 0.0;
  if (std::abs(report.density - solution.density) > 1e-9 * std::max(1.0, report.density)) {
    add(Violation::Kind::density, 0, 0, "reported density differs from the recomputed value");
  }
  return report;
}

}  // namespace nest
