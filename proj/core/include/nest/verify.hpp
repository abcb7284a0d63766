#pragma once

#include <string>
#include <vector>

#include "nest/solution_io.hpp"

namespace nest {

/// A polygon with holes in absolute coordinates.
struct PlacedRings {
  Ring outer;
  std::vector<Ring> holes;
};

/// Brute-force interior-overlap test: both boundaries are split at every
/// mutual intersection and each piece is tested against the other polygon,
/// plus one interior point each way. Points closer than `tol` to a boundary
/// count as touching.
bool interiors_overlap(const PlacedRings& a, const PlacedRings& b, double tol);

/// A point strictly inside the polygon, found by a horizontal scanline.
Point interior_point(const PlacedRings& p);

struct Violation {
  enum class Kind { overlap, containment, assignment, density };
  Kind kind = Kind::overlap;
  /// Placement indices; `b` is used for overlaps only.
  std::size_t a = 0;
  std::size_t b = 0;
  std::string message;
};

struct VerifyReport {
  std::vector<Violation> violations;
  double density = 0.0;

  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const;
  std::string summary() const;
};

/// All-pairs overlap check without spatial index or poles, per-item
/// containment, demand bookkeeping and a density recomputation.
VerifyReport verify_solution(const StripInstance& instance, const SolutionFile& solution);

/// Source rings of `type` moved by the file transformation `t`.
PlacedRings place_rings(const ItemType& type, const Transformation& t);

}  // namespace nest
