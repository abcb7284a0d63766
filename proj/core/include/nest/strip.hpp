#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nest/budget.hpp"
#include "nest/cde.hpp"
#include "nest/rng.hpp"
#include "nest/separator.hpp"

namespace nest {

/// One item type of an instance.
///
/// `shape` is the source polygon translated so that its bounding-box center
/// sits at the origin; `origin` is that center in source coordinates. All
/// solver transformations act on `shape`.
struct ItemType {
  std::size_t id = 0;
  Ring outer;
  std::vector<Ring> holes;
  std::shared_ptr<const Polygon> shape;
  Point origin;
  int demand = 1;
  Orientations orientations;
  /// Allowed angles as written in the instance file, in degrees.
  std::vector<double> angles_deg;
};

struct StripInstance {
  std::string name;
  double strip_height = 0.0;
  std::vector<ItemType> items;

  /// Throws std::invalid_argument on a non-positive height, a demand < 1 or
  /// an item that fits the strip height in no allowed orientation.
  void validate() const;
  std::size_t total_demand() const;
  double total_item_area() const;
};

/// Builds an item type from source rings; normalizes and centers the shape.
ItemType make_item_type(std::size_t id, Ring outer, std::vector<Ring> holes, int demand, Orientations orientations);

/// Degrees to radians for an allowed-orientation list.
Orientations discrete_orientations(const std::vector<double>& degrees_list, bool allow_reflection);

/// Copy of `instance` with the strip height scaled by `factor`.
StripInstance inflate_strip(StripInstance instance, double factor = 1.0001);

/// Smallest bounding-box height the item reaches over its allowed orientations.
double min_orientation_height(const ItemType& type);

/// Instance-file transformation (acting on source coordinates) from a solver
/// transformation (acting on the centered shape), and back.
Transformation to_source_frame(const ItemType& type, const Transformation& t);
Transformation from_source_frame(const ItemType& type, const Transformation& t);

/// One ItemSpec per item copy, type by type; copies share the base polygon.
std::vector<ItemSpec> expand_items(const StripInstance& instance);

struct SolverConfig {
  double r_x = 0.001;
  double r_c_start = 0.0005;
  double r_c_end = 0.00001;
  int m_x = 3;
  int n_x = 200;
  int m_c = 5;
  int n_c = 100;
  double tl_split_explore = 0.8;
  double tl_split_compress = 0.2;
  SeparatorConfig separator;

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

struct SolutionRecord {
  double strip_height = 0.0;
  double strip_length = 0.0;
  /// Solver-frame placements, one per expanded item copy.
  std::vector<Transformation> placements;
  double density = 0.0;
  double elapsed_s = 0.0;
  std::uint64_t seed = 0;

  /// Digest of every field except the elapsed time.
  std::uint64_t hash() const;
};

/// Shrink ratio of the compression phase after spending `progress` of its
/// budget: linear from r_c_start at 0 to r_c_end at 1.
double compression_ratio(const SolverConfig& cfg, double progress);

/// 100 * total item area / (height * length).
double density(const StripInstance& instance, double strip_length);

/// Bottom-left fill in decreasing convex-hull-area order. Throws
/// LayoutError when an item fits no orientation.
Layout construct_initial(const StripInstance& instance, Rng& rng);

struct ProgressEvent {
  int epoch = 0;
  const char* phase = "";
  double strip_length = 0.0;
  double density = 0.0;
  double elapsed_s = 0.0;
};
using ProgressFn = std::function<void(const ProgressEvent&)>;

/// Either wall-clock seconds or a separation-iteration count for a whole run.
struct RunLimit {
  double seconds = 0.0;
  std::uint64_t iterations = 0;

  static RunLimit time(double s) { return {s, 0}; }
  static RunLimit iters(std::uint64_t n) { return {0.0, n}; }
  Budget phase_budget(double share) const;
};

/// Pool of infeasible local optima ranked by loss.
class SolutionPool {
 public:
  void add(Snapshot s, double loss);
  void clear() { entries_.clear(); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  /// Rank drawn from a geometric distribution (p = 0.5) over ascending loss,
  /// truncated to the pool size.
  const Snapshot& select(Rng& rng) const;
  double loss_at(std::size_t rank) const { return entries_[rank].loss; }

 private:
  struct Entry {
    Snapshot snapshot;
    double loss;
  };
  std::vector<Entry> entries_;
};

/// Ids of the larger half of the items by convex-hull area (at least two
/// when the layout has two items).
std::vector<ItemId> large_items(const Layout& layout);

/// Exchanges the placements of two distinct large items and clamps both to
/// the strip. Returns the swapped pair; a layout of fewer than two items is
/// left unchanged.
std::pair<ItemId, ItemId> disrupt(SeparationState& state, Rng& rng);

class Explorer {
 public:
  Explorer(const StripInstance& instance, const SolverConfig& cfg, std::uint64_t seed, ProgressFn progress = {});

  /// Exploration from the feasible `state`; returns the best feasible layout
  /// and leaves `state` somewhere in the last attempted configuration.
  Snapshot explore(SeparationState& state, Budget& budget);
  /// Compression from the feasible snapshot `best`; never returns a longer strip.
  Snapshot compress(SeparationState& state, const Snapshot& best, Budget& budget);

  int epoch() const { return epoch_; }

 private:
  void emit(const char* phase, double length);

  const StripInstance& instance_;
  SolverConfig cfg_;
  Rng separator_rng_;
  Rng pool_rng_;
  Rng disruption_rng_;
  ProgressFn progress_;
  std::chrono::steady_clock::time_point start_;
  int epoch_ = 0;
};

/// Construction, exploration and compression within `limit`. The returned
/// record has passed the independent feasibility check.
SolutionRecord solve(const StripInstance& instance, const SolverConfig& cfg, RunLimit limit, std::uint64_t seed,
                     ProgressFn progress = {});

/// Record of a layout for `instance`.
SolutionRecord make_record(const StripInstance& instance, const Layout& layout, std::uint64_t seed, double elapsed_s);

}  // namespace nest
