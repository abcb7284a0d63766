#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "nest/polygon.hpp"

namespace nest {

using ItemId = std::size_t;

/// Rotations an item may take. Angles are radians in [0, 2*pi).
struct Orientations {
  bool continuous = false;
  std::vector<double> angles{0.0};
  bool allow_reflection = false;
};

/// One placeable item copy. Copies of the same item type share `shape`.
struct ItemSpec {
  std::shared_ptr<const Polygon> shape;
  Orientations orientations;
  /// Index of the item type this copy was expanded from.
  std::size_t type = 0;
};

}  // namespace nest
