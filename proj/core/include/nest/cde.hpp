#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nest/geometry.hpp"
#include "nest/item.hpp"
#include "nest/polygon.hpp"

namespace nest {

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Separation, as a fraction of the larger diameter, below which two shapes
/// are reported as colliding.
inline constexpr double kCollisionEpsilonRatio = 1e-10;

/// Exact pairwise test on placed shapes: bounding boxes, then overlapping
/// poles (early accept), then edge proximity and interior containment.
/// Shapes closer than `kCollisionEpsilonRatio * max diameter` collide.
bool shapes_collide(const Polygon& a, const Polygon& b);

/// Saved layout state. Restoring it reproduces every query result.
struct Snapshot {
  std::uint64_t instance_token = 0;
  double strip_length = 0.0;
  std::vector<Transformation> placements;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Uniform grid over the strip storing item ids by bounding-box overlap.
class GridIndex {
 public:
  GridIndex() = default;
  GridIndex(double length, double height, double cell_size, std::size_t n_items);

  void insert(ItemId id, const BBox& box);
  void erase(ItemId id);
  void update(ItemId id, const BBox& box) {
    erase(id);
    insert(id, box);
  }

  /// Invokes `fn(id)` once for every stored item whose cell range meets `box`.
  template <typename Fn>
  void visit(const BBox& box, Fn&& fn) const;

  std::size_t columns() const { return nx_; }
  std::size_t rows() const { return ny_; }

 private:
  struct Range {
    std::uint32_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool valid = false;
  };
  Range range_of(const BBox& box) const;

  double cell_ = 1.0;
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  std::vector<std::vector<ItemId>> cells_;
  std::vector<Range> ranges_;
};

/// Placement of every item in a strip of fixed height and variable length.
///
/// Containment is enforced by construction: every stored placement keeps the
/// item's bounding box inside [0, length] x [0, height]. A layout is
/// single-writer; copies are independent and may move between threads.
class Layout {
 public:
  Layout(std::vector<ItemSpec> items, double strip_height, double strip_length,
         const std::vector<Transformation>& placements);

  std::size_t size() const { return items_.size(); }
  double strip_height() const { return height_; }
  double strip_length() const { return length_; }
  const ItemSpec& item(ItemId i) const { return items_[i]; }
  const Transformation& placement(ItemId i) const { return placements_[i]; }
  const std::vector<Transformation>& placements() const { return placements_; }
  const Polygon& placed_shape(ItemId i) const { return placed_[i]; }
  std::uint64_t instance_token() const { return token_; }

  /// Placed items whose interiors meet `shape`, ascending, excluding `ignore`.
  std::vector<ItemId> collisions(const Polygon& shape, std::optional<ItemId> ignore = std::nullopt) const;
  void collisions_into(const Polygon& shape, std::optional<ItemId> ignore, std::vector<ItemId>& out) const;

  /// Items the spatial index offers as candidates for `box` (superset of the
  /// exact bbox overlaps), ascending.
  std::vector<ItemId> index_candidates(const BBox& box) const;

  /// Throws LayoutError when the moved bounding box leaves the strip.
  void move_item(ItemId i, const Transformation& t);

  Snapshot snapshot() const;
  /// Throws LayoutError for a snapshot taken from another instance.
  void restore(const Snapshot& s);

  /// Sets the strip length, pulling every item that overhangs the new right
  /// edge left by exactly the overhang. Throws LayoutError when an item is
  /// wider than `length`.
  void set_strip_length(double length);

  /// Bounding box of item i's shape under the linear part of `t` (no translation).
  BBox local_bounds(ItemId i, const Transformation& t) const;

  /// True when the bounding box of the shape under `t` fits the strip
  /// height (and the current length).
  bool orientation_fits(ItemId i, const Transformation& t) const;

  /// Moves the translation of `t` to the nearest value keeping the shape's
  /// bounding box inside the strip. The rotation must fit.
  Transformation clamp(ItemId i, Transformation t) const;

  /// Slack allowed on the containment check, in length units.
  double containment_tolerance() const;

 private:
  void rebuild_index();
  void check_contained(const BBox& box) const;

  std::vector<ItemSpec> items_;
  double height_;
  double length_;
  std::vector<Transformation> placements_;
  std::vector<Polygon> placed_;
  double cell_size_ = 1.0;
  GridIndex index_;
  std::uint64_t token_;
};

template <typename Fn>
void GridIndex::visit(const BBox& box, Fn&& fn) const {
  const Range q = range_of(box);
  if (!q.valid) return;
  for (std::uint32_t y = q.y0; y <= q.y1; ++y) {
    for (std::uint32_t x = q.x0; x <= q.x1; ++x) {
      for (ItemId id : cells_[y * nx_ + x]) {
        // Report each id only from the first cell shared by both ranges.
        const Range& r = ranges_[id];
        if (x == std::max(q.x0, r.x0) && y == std::max(q.y0, r.y0)) fn(id);
      }
    }
  }
}

}  // namespace nest
