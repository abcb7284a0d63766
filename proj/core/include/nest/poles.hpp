#pragma once

#include <span>
#include <vector>

#include "nest/geometry.hpp"
#include "nest/polygon.hpp"

namespace nest {

struct PoleOptions {
  int max_poles = kMaxPoles;
  /// Grid refinement stops once a cell cannot beat the incumbent by more
  /// than `tolerance_ratio * diameter`.
  double tolerance_ratio = 1e-3;
  /// Pole generation stops once the next radius falls below this fraction
  /// of the first pole's radius.
  double min_radius_ratio = 0.1;
};

/// Iterative polylabel. Pole k maximizes the clearance
/// min(distance to boundary, distance to the surface of poles 1..k-1)
/// over the interior, found by quadtree refinement of that field.
PoleSet compute_poles(std::span<const Point> outer, std::span<const Ring> holes, double diameter,
                      const PoleOptions& options = {});

/// Recomputes the pole set of an existing shape. Throws GeometryError when
/// `max_poles` is outside [1, 16] or the shape has no area.
PoleSet compute_poles(const Polygon& shape, int max_poles);

}  // namespace nest
