#include "nest/cde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace nest {
namespace {

std::atomic<std::uint64_t> next_token{1};

struct Segment {
  Point a;
  Point b;
};

// Edges of `shape` whose bounding box meets `box` (inflated by eps).
void collect_edges(const Polygon& shape, const BBox& box, double eps, std::vector<Segment>& out) {
  auto scan = [&](const Ring& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& p = ring[j];
      const Point& q = ring[i];
      if (std::max(p.x, q.x) + eps < box.min_x || std::min(p.x, q.x) - eps > box.max_x ||
          std::max(p.y, q.y) + eps < box.min_y || std::min(p.y, q.y) - eps > box.max_y) {
        continue;
      }
      out.push_back({p, q});
    }
  };
  scan(shape.outer());
  for (const Ring& h : shape.holes()) scan(h);
}

}  // namespace

bool shapes_collide(const Polygon& a, const Polygon& b) {
  const double eps = kCollisionEpsilonRatio * std::max(a.diameter(), b.diameter());
  if (!a.bbox().overlaps(b.bbox(), eps)) return false;

  for (const Pole& pa : a.poles()) {
    for (const Pole& pb : b.poles()) {
      if (penetration_depth(pa, pb) > 0.0) return true;
    }
  }

  thread_local std::vector<Segment> edges_a;
  thread_local std::vector<Segment> edges_b;
  edges_a.clear();
  edges_b.clear();
  collect_edges(a, b.bbox(), eps, edges_a);
  if (!edges_a.empty()) {
    collect_edges(b, a.bbox(), eps, edges_b);
    for (const Segment& ea : edges_a) {
      for (const Segment& eb : edges_b) {
        if (segments_within(ea.a, ea.b, eb.a, eb.b, eps)) return true;
      }
    }
  }

  // No boundary contact: either disjoint or one lies inside the other.
  const Point rep_a = a.poles().empty() ? a.outer().front() : a.poles().front().center;
  const Point rep_b = b.poles().empty() ? b.outer().front() : b.poles().front().center;
  return point_in_polygon(rep_a, b) || point_in_polygon(rep_b, a);
}

GridIndex::GridIndex(double length, double height, double cell_size, std::size_t n_items) : cell_(cell_size) {
  constexpr double kMaxCells = 512.0;
  cell_ = std::max({cell_size, length / kMaxCells, height / kMaxCells});
  nx_ = static_cast<std::size_t>(std::max(1.0, std::ceil(length / cell_)));
  ny_ = static_cast<std::size_t>(std::max(1.0, std::ceil(height / cell_)));
  cells_.assign(nx_ * ny_, {});
  ranges_.assign(n_items, {});
}

GridIndex::Range GridIndex::range_of(const BBox& box) const {
  Range r;
  if (box.empty() || !std::isfinite(box.min_x) || !std::isfinite(box.max_x) || !std::isfinite(box.min_y) ||
      !std::isfinite(box.max_y)) {
    return r;
  }
  auto cell = [this](double v, std::size_t n) {
    const double c = std::floor(v / cell_);
    if (c < 0.0) return std::uint32_t{0};
    if (c >= static_cast<double>(n)) return static_cast<std::uint32_t>(n - 1);
    return static_cast<std::uint32_t>(c);
  };
  r.x0 = cell(box.min_x, nx_);
  r.x1 = cell(box.max_x, nx_);
  r.y0 = cell(box.min_y, ny_);
  r.y1 = cell(box.max_y, ny_);
  r.valid = true;
  return r;
}

void GridIndex::insert(ItemId id, const BBox& box) {
  const Range r = range_of(box);
  ranges_[id] = r;
  if (!r.valid) return;
  for (std::uint32_t y = r.y0; y <= r.y1; ++y) {
    for (std::uint32_t x = r.x0; x <= r.x1; ++x) cells_[y * nx_ + x].push_back(id);
  }
}

void GridIndex::erase(ItemId id) {
  Range& r = ranges_[id];
  if (!r.valid) return;
  for (std::uint32_t y = r.y0; y <= r.y1; ++y) {
    for (std::uint32_t x = r.x0; x <= r.x1; ++x) {
      auto& cell = cells_[y * nx_ + x];
      auto it = std::find(cell.begin(), cell.end(), id);
      if (it != cell.end()) {
        *it = cell.back();
        cell.pop_back();
      }
    }
  }
  r.valid = false;
}

Layout::Layout(std::vector<ItemSpec> items, double strip_height, double strip_length,
               const std::vector<Transformation>& placements)
    : items_(std::move(items)), height_(strip_height), length_(strip_length), token_(next_token++) {
  if (!(strip_height > 0.0) || !(strip_length > 0.0)) throw LayoutError("strip dimensions must be positive");
  if (placements.size() != items_.size()) throw LayoutError("one placement per item is required");
  std::vector<double> diameters;
  for (const ItemSpec& it : items_) {
    if (!it.shape) throw LayoutError("item without a shape");
    diameters.push_back(it.shape->diameter());
  }
  if (!diameters.empty()) {
    std::nth_element(diameters.begin(), diameters.begin() + diameters.size() / 2, diameters.end());
    cell_size_ = diameters[diameters.size() / 2];
  }
  placements_ = placements;
  placed_.resize(items_.size());
  for (ItemId i = 0; i < items_.size(); ++i) {
    placed_[i].assign_transformed(*items_[i].shape, placements_[i]);
    check_contained(placed_[i].bbox());
  }
  rebuild_index();
}

double Layout::containment_tolerance() const { return 1e-9 * std::max(length_, height_); }

void Layout::check_contained(const BBox& box) const {
  const double tol = containment_tolerance();
  if (box.min_x < -tol || box.min_y < -tol || box.max_x > length_ + tol || box.max_y > height_ + tol) {
    throw LayoutError("placement leaves the strip");
  }
}

void Layout::rebuild_index() {
  index_ = GridIndex(length_, height_, cell_size_, items_.size());
  for (ItemId i = 0; i < items_.size(); ++i) index_.insert(i, placed_[i].bbox());
}

void Layout::collisions_into(const Polygon& shape, std::optional<ItemId> ignore, std::vector<ItemId>& out) const {
  out.clear();
  BBox query = shape.bbox();
  const double margin = kCollisionEpsilonRatio * std::max(shape.diameter(), cell_size_) * 4.0;
  query.min_x -= margin;
  query.min_y -= margin;
  query.max_x += margin;
  query.max_y += margin;
  index_.visit(query, [&](ItemId id) {
    if (ignore && *ignore == id) return;
    if (shapes_collide(shape, placed_[id])) out.push_back(id);
  });
  std::sort(out.begin(), out.end());
}

std::vector<ItemId> Layout::collisions(const Polygon& shape, std::optional<ItemId> ignore) const {
  std::vector<ItemId> out;
  collisions_into(shape, ignore, out);
  return out;
}

std::vector<ItemId> Layout::index_candidates(const BBox& box) const {
  std::vector<ItemId> out;
  index_.visit(box, [&](ItemId id) { out.push_back(id); });
  std::sort(out.begin(), out.end());
  return out;
}

BBox Layout::local_bounds(ItemId i, const Transformation& t) const {
  const double c = std::cos(t.theta);
  const double s = std::sin(t.theta);
  BBox b;
  for (const Point& p : items_[i].shape->outer()) {
    const double x = t.reflected ? -p.x : p.x;
    b.expand({c * x - s * p.y, s * x + c * p.y});
  }
  return b;
}

bool Layout::orientation_fits(ItemId i, const Transformation& t) const {
  const BBox b = local_bounds(i, t);
  const double tol = containment_tolerance();
  return b.height() <= height_ + tol && b.width() <= length_ + tol;
}

Transformation Layout::clamp(ItemId i, Transformation t) const {
  const BBox b = local_bounds(i, t);
  const double lo_x = -b.min_x;
  const double hi_x = length_ - b.max_x;
  const double lo_y = -b.min_y;
  const double hi_y = height_ - b.max_y;
  const double tol = containment_tolerance();
  if (hi_x < lo_x - tol || hi_y < lo_y - tol) throw LayoutError("item does not fit the strip in this orientation");
  // An exact fit can miss by rounding; center the shape in that case.
  t.dx = hi_x < lo_x ? 0.5 * (lo_x + hi_x) : std::clamp(t.dx, lo_x, hi_x);
  t.dy = hi_y < lo_y ? 0.5 * (lo_y + hi_y) : std::clamp(t.dy, lo_y, hi_y);
  return t;
}

void Layout::move_item(ItemId i, const Transformation& t) {
  if (i >= items_.size()) throw LayoutError("unknown item id");
  BBox b = local_bounds(i, t);
  b.min_x += t.dx;
  b.max_x += t.dx;
  b.min_y += t.dy;
  b.max_y += t.dy;
  check_contained(b);
  placements_[i] = t;
  placed_[i].assign_transformed(*items_[i].shape, t);
  index_.update(i, placed_[i].bbox());
}

Snapshot Layout::snapshot() const { return Snapshot{token_, length_, placements_}; }

void Layout::restore(const Snapshot& s) {
  if (s.instance_token != token_ || s.placements.size() != items_.size()) {
    throw LayoutError("snapshot belongs to a different instance");
  }
  const bool resized = s.strip_length != length_;
  length_ = s.strip_length;
  for (ItemId i = 0; i < items_.size(); ++i) {
    if (placements_[i] == s.placements[i]) continue;
    placements_[i] = s.placements[i];
    placed_[i].assign_transformed(*items_[i].shape, placements_[i]);
    if (!resized) index_.update(i, placed_[i].bbox());
  }
  if (resized) rebuild_index();
}

void Layout::set_strip_length(double length) {
  if (!(length > 0.0)) throw LayoutError("strip length must be positive");
  const double tol = 1e-9 * std::max(length, height_);
  for (ItemId i = 0; i < items_.size(); ++i) {
    if (placed_[i].bbox().width() > length + tol) throw LayoutError("item is wider than the requested strip length");
  }
  for (ItemId i = 0; i < items_.size(); ++i) {
    const double overhang = placed_[i].bbox().max_x - length;
    if (overhang > 0.0) {
      placements_[i].dx -= overhang;
      placed_[i].assign_transformed(*items_[i].shape, placements_[i]);
      const double underhang = -placed_[i].bbox().min_x;
      if (underhang > 0.0) {
        placements_[i].dx += underhang;
        placed_[i].assign_transformed(*items_[i].shape, placements_[i]);
      }
    }
  }
  length_ = length;
  rebuild_index();
}

}  // namespace nest
