#include "nest/strip.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "nest/solution_io.hpp"
#include "nest/verify.hpp"

namespace nest {

namespace {

BBox oriented_bounds(const Polygon& shape, const Transformation& t) {
  BBox b;
  const Transformation l = t.linear_part();
  for (const Point& p : shape.convex_hull()) b.expand(l.apply(p));
  return b;
}

// Rotations that lay one hull edge flat; the minimum bounding-box height over
// all rotations is reached at one of them.
std::vector<double> edge_aligned_angles(const Polygon& shape) {
  const Ring& h = shape.convex_hull();
  std::vector<double> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Point e = h[(i + 1) % h.size()] - h[i];
    out.push_back(normalize_angle(-std::atan2(e.y, e.x)));
  }
  return out;
}

std::vector<Transformation> candidate_orientations(const ItemType& type, double height) {
  const Orientations& o = type.orientations;
  std::vector<bool> flips{false};
  if (o.allow_reflection) flips.push_back(true);
  std::vector<double> angles = o.continuous ? std::vector<double>{0.0, 0.5 * std::numbers::pi, std::numbers::pi,
                                                                  1.5 * std::numbers::pi}
                                            : o.angles;
  auto fitting = [&](const std::vector<double>& as) {
    std::vector<Transformation> out;
    for (double a : as) {
      for (bool f : flips) {
        const Transformation t{0.0, 0.0, a, f};
        if (oriented_bounds(*type.shape, t).height() <= height * (1.0 + 1e-9)) out.push_back(t);
      }
    }
    return out;
  };
  std::vector<Transformation> out = fitting(angles);
  if (out.empty() && o.continuous) out = fitting(edge_aligned_angles(*type.shape));
  return out;
}

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    h ^= (v >> (8 * k)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
}

void mix(std::uint64_t& h, double v) { mix(h, std::bit_cast<std::uint64_t>(v)); }

}  // namespace

// --- instance ---------------------------------------------------------------

ItemType make_item_type(std::size_t id, Ring outer, std::vector<Ring> holes, int demand, Orientations orientations) {
  const Polygon source = Polygon::create(std::move(outer), std::move(holes), 1);
  ItemType type;
  type.id = id;
  type.outer = source.outer();
  type.holes = source.holes();
  type.demand = demand;
  type.orientations = std::move(orientations);
  if (!type.orientations.continuous) {
    for (double a : type.orientations.angles) type.angles_deg.push_back(radians_to_degrees(a));
  }
  const BBox b = source.bbox();
  type.origin = {0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y)};
  auto shifted = [&](const Ring& r) {
    Ring out;
    out.reserve(r.size());
    for (const Point& p : r) out.push_back(p - type.origin);
    return out;
  };
  std::vector<Ring> centered_holes;
  for (const Ring& h : type.holes) centered_holes.push_back(shifted(h));
  type.shape = std::make_shared<const Polygon>(Polygon::create(shifted(type.outer), std::move(centered_holes)));
  return type;
}

Orientations discrete_orientations(const std::vector<double>& degrees_list, bool allow_reflection) {
  Orientations o;
  o.continuous = false;
  o.allow_reflection = allow_reflection;
  o.angles.clear();
  for (double d : degrees_list) o.angles.push_back(normalize_angle(degrees_to_radians(d)));
  return o;
}

StripInstance inflate_strip(StripInstance instance, double factor) {
  instance.strip_height *= factor;
  return instance;
}

double min_orientation_height(const ItemType& type) {
  const Orientations& o = type.orientations;
  std::vector<double> angles = o.continuous ? edge_aligned_angles(*type.shape) : o.angles;
  double best = INFINITY;
  for (double a : angles) {
    for (bool f : {false, true}) {
      if (f && !o.allow_reflection) continue;
      best = std::min(best, oriented_bounds(*type.shape, Transformation{0.0, 0.0, a, f}).height());
    }
  }
  return best;
}

void StripInstance::validate() const {
  if (!(std::isfinite(strip_height) && strip_height > 0.0)) throw std::invalid_argument("strip height must be positive");
  if (items.empty()) throw std::invalid_argument("instance has no items");
  for (const ItemType& t : items) {
    if (t.demand < 1) throw std::invalid_argument("item " + std::to_string(t.id) + " has demand < 1");
    if (!t.shape) throw std::invalid_argument("item " + std::to_string(t.id) + " has no shape");
    if (!t.orientations.continuous && t.orientations.angles.empty()) {
      throw std::invalid_argument("item " + std::to_string(t.id) + " allows no orientation");
    }
    if (min_orientation_height(t) > strip_height * (1.0 + 1e-9)) {
      throw std::invalid_argument("item " + std::to_string(t.id) + " fits no orientation within the strip height");
    }
  }
}

std::size_t StripInstance::total_demand() const {
  std::size_t n = 0;
  for (const ItemType& t : items) n += static_cast<std::size_t>(t.demand);
  return n;
}

double StripInstance::total_item_area() const {
  double a = 0.0;
  for (const ItemType& t : items) a += t.demand * t.shape->area();
  return a;
}

Transformation to_source_frame(const ItemType& type, const Transformation& t) {
  const Point rc = t.linear_part().apply(type.origin);
  return {t.dx - rc.x, t.dy - rc.y, t.theta, t.reflected};
}

Transformation from_source_frame(const ItemType& type, const Transformation& t) {
  const Point rc = t.linear_part().apply(type.origin);
  return {t.dx + rc.x, t.dy + rc.y, t.theta, t.reflected};
}

std::vector<ItemSpec> expand_items(const StripInstance& instance) {
  std::vector<ItemSpec> out;
  out.reserve(instance.total_demand());
  for (std::size_t k = 0; k < instance.items.size(); ++k) {
    const ItemType& t = instance.items[k];
    for (int c = 0; c < t.demand; ++c) out.push_back(ItemSpec{t.shape, t.orientations, k});
  }
  return out;
}

// --- config and records -----------------------------------------------------

void SolverConfig::validate() const {
  if (!(0.0 < r_c_end && r_c_end < r_c_start && r_c_start < r_x && r_x < 1.0)) {
    throw std::invalid_argument("shrink ratios must satisfy 0 < r_c_end < r_c_start < r_x < 1");
  }
  if (m_x < 1 || n_x < 1 || m_c < 1 || n_c < 1) throw std::invalid_argument("separation limits must be at least 1");
  if (tl_split_explore < 0.0 || tl_split_compress < 0.0 ||
      std::abs(tl_split_explore + tl_split_compress - 1.0) > 1e-12) {
    throw std::invalid_argument("time split must be non-negative and sum to 1");
  }
  if (!(separator.proxy.r_epsilon > 0.0)) throw std::invalid_argument("r_epsilon must be positive");
  separator.gls.validate();
  separator.sampler.validate();
}

std::uint64_t SolutionRecord::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  mix(h, strip_height);
  mix(h, strip_length);
  mix(h, static_cast<std::uint64_t>(placements.size()));
  for (const Transformation& t : placements) {
    mix(h, t.dx);
    mix(h, t.dy);
    mix(h, t.theta);
    mix(h, static_cast<std::uint64_t>(t.reflected));
  }
  mix(h, density);
  mix(h, seed);
  return h;
}

double density(const StripInstance& instance, double strip_length) {
  return 100.0 / (instance.strip_height * strip_length) * instance.total_item_area();
}

SolutionRecord make_record(const StripInstance& instance, const Layout& layout, std::uint64_t seed, double elapsed_s) {
  SolutionRecord r;
  r.strip_height = instance.strip_height;
  r.strip_length = layout.strip_length();
  r.placements = layout.placements();
  r.density = density(instance, r.strip_length);
  r.elapsed_s = elapsed_s;
  r.seed = seed;
  return r;
}

double compression_ratio(const SolverConfig& cfg, double progress) {
  return cfg.r_c_start * (1.0 - progress) + cfg.r_c_end * progress;
}

Budget RunLimit::phase_budget(double share) const {
  if (iterations > 0) {
    const auto n = static_cast<std::uint64_t>(std::llround(share * static_cast<double>(iterations)));
    return Budget::iterations(std::max<std::uint64_t>(1, n));
  }
  if (!(seconds > 0.0)) throw std::invalid_argument("time limit must be positive");
  return Budget::seconds(share * seconds);
}

// --- construction -----------------------------------------------------------

Layout construct_initial(const StripInstance& instance, Rng& rng) {
  std::vector<ItemSpec> items = expand_items(instance);
  const double height = instance.strip_height;
  const double step = 0.005 * height;

  std::vector<ItemId> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) {
    return items[a].shape->hull_area() > items[b].shape->hull_area();
  });

  std::vector<std::vector<Transformation>> orientations(instance.items.size());
  for (std::size_t k = 0; k < instance.items.size(); ++k) {
    orientations[k] = candidate_orientations(instance.items[k], height);
    if (orientations[k].empty()) {
      throw LayoutError("item " + std::to_string(instance.items[k].id) + " fits no orientation");
    }
  }

  std::vector<double> diameters;
  double extent = 0.0;
  for (const ItemSpec& s : items) {
    diameters.push_back(s.shape->diameter());
    extent += s.shape->diameter() + step;
  }
  std::nth_element(diameters.begin(), diameters.begin() + static_cast<std::ptrdiff_t>(diameters.size() / 2),
                   diameters.end());
  GridIndex index(extent, height, diameters[diameters.size() / 2], items.size());

  std::vector<Polygon> placed(items.size());
  std::vector<Transformation> placements(items.size());
  // Earlier columns stay blocked for every later copy of the same type.
  std::vector<std::size_t> first_column(instance.items.size(), 0);
  Polygon candidate;
  double right_edge = 0.0;

  auto collides = [&](const Polygon& shape) {
    BBox q = shape.bbox();
    const double margin = 4.0 * kCollisionEpsilonRatio * shape.diameter();
    q.min_x -= margin;
    q.min_y -= margin;
    q.max_x += margin;
    q.max_y += margin;
    bool hit = false;
    index.visit(q, [&](ItemId id) {
      if (!hit && shapes_collide(shape, placed[id])) hit = true;
    });
    return hit;
  };

  for (ItemId i : order) {
    const std::size_t type = items[i].type;
    std::vector<BBox> bounds;
    for (const Transformation& o : orientations[type]) bounds.push_back(oriented_bounds(*items[i].shape, o));

    bool done = false;
    for (std::size_t col = first_column[type]; !done; ++col) {
      const double x = static_cast<double>(col) * step;
      double best_y = INFINITY;
      Transformation best_t;
      for (std::size_t k = 0; k < orientations[type].size(); ++k) {
        const BBox& b = bounds[k];
        const double top = std::max(0.0, height - b.height());
        const auto n_rows = static_cast<std::size_t>(std::floor(top / step));
        for (std::size_t row = 0; row <= n_rows + 1; ++row) {
          if (row == n_rows + 1 && static_cast<double>(n_rows) * step >= top) break;
          const double y = row <= n_rows ? static_cast<double>(row) * step : top;
          if (y >= best_y) break;
          Transformation t = orientations[type][k];
          t.dx = x - b.min_x;
          t.dy = y - b.min_y;
          candidate.assign_transformed(*items[i].shape, t);
          if (!collides(candidate)) {
            best_y = y;
            best_t = t;
            break;
          }
        }
      }
      if (best_y < INFINITY) {
        placements[i] = best_t;
        placed[i].assign_transformed(*items[i].shape, best_t);
        index.insert(i, placed[i].bbox());
        right_edge = std::max(right_edge, placed[i].bbox().max_x);
        first_column[type] = col;
        done = true;
      }
    }
  }
  return Layout(std::move(items), height, right_edge, placements);
}

// --- exploration ------------------------------------------------------------

void SolutionPool::add(Snapshot s, double loss) {
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), loss,
                              [](double l, const Entry& e) { return l < e.loss; });
  entries_.insert(pos, Entry{std::move(s), loss});
}

const Snapshot& SolutionPool::select(Rng& rng) const {
  if (entries_.empty()) throw std::logic_error("selection from an empty pool");
  std::geometric_distribution<std::size_t> rank(0.5);
  for (;;) {
    const std::size_t r = rank(rng);
    if (r < entries_.size()) return entries_[r].snapshot;
  }
}

std::vector<ItemId> large_items(const Layout& layout) {
  std::vector<ItemId> ids(layout.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](ItemId a, ItemId b) {
    return layout.item(a).shape->hull_area() > layout.item(b).shape->hull_area();
  });
  const std::size_t keep = std::min(ids.size(), std::max<std::size_t>(2, (ids.size() + 1) / 2));
  ids.resize(keep);
  return ids;
}

namespace {

bool orientation_allowed(const Orientations& o, const Transformation& t) {
  if (t.reflected && !o.allow_reflection) return false;
  if (o.continuous) return true;
  return std::any_of(o.angles.begin(), o.angles.end(),
                     [&](double a) {
                       const double d = normalize_angle(a - t.theta);
                       return d < 1e-9 || d > 2.0 * std::numbers::pi - 1e-9;
                     });
}

}  // namespace

std::pair<ItemId, ItemId> disrupt(SeparationState& state, Rng& rng) {
  const Layout& layout = state.layout();
  const std::vector<ItemId> large = large_items(layout);
  if (large.size() < 2) return {0, 0};
  const ItemId a = large[uniform_index(rng, large.size())];
  ItemId b = a;
  for (int attempt = 0; attempt < 8 && (b == a || layout.item(b).type == layout.item(a).type); ++attempt) {
    b = large[uniform_index(rng, large.size())];
  }
  while (b == a) b = large[uniform_index(rng, large.size())];

  const Transformation ta = layout.placement(a);
  const Transformation tb = layout.placement(b);
  auto target = [&](ItemId item, const Transformation& own, const Transformation& other) {
    Transformation t = other;
    if (!orientation_allowed(layout.item(item).orientations, other) || !layout.orientation_fits(item, other)) {
      t.theta = own.theta;
      t.reflected = own.reflected;
    }
    return layout.clamp(item, t);
  };
  const Transformation na = target(a, ta, tb);
  const Transformation nb = target(b, tb, ta);
  state.move_item(a, na);
  state.move_item(b, nb);
  return {a, b};
}

Explorer::Explorer(const StripInstance& instance, const SolverConfig& cfg, std::uint64_t seed, ProgressFn progress)
    : instance_(instance),
      cfg_(cfg),
      separator_rng_(make_rng(seed, "separator")),
      pool_rng_(make_rng(seed, "pool-selection")),
      disruption_rng_(make_rng(seed, "disruption")),
      progress_(std::move(progress)),
      start_(std::chrono::steady_clock::now()) {}

void Explorer::emit(const char* phase, double length) {
  if (!progress_) return;
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  progress_(ProgressEvent{epoch_, phase, length, density(instance_, length), t});
}

namespace {

bool shrink(SeparationState& state, double ratio) {
  try {
    state.set_strip_length(state.layout().strip_length() * (1.0 - ratio));
  } catch (const LayoutError&) {
    return false;
  }
  state.weights().reset();
  return true;
}

}  // namespace

Snapshot Explorer::explore(SeparationState& state, Budget& budget) {
  Snapshot best = state.snapshot();
  emit("explore", best.strip_length);
  if (!shrink(state, cfg_.r_x)) return best;
  SolutionPool pool;
  while (!budget.expired()) {
    separate(state, cfg_.m_x, cfg_.n_x, cfg_.separator, separator_rng_, budget);
    if (state.loss() == 0.0) {
      best = state.snapshot();
      ++epoch_;
      emit("explore", best.strip_length);
      pool.clear();
      if (!shrink(state, cfg_.r_x)) break;
    } else {
      pool.add(state.snapshot(), state.loss());
      state.restore(pool.select(pool_rng_));
      state.weights().reset();
      disrupt(state, disruption_rng_);
    }
  }
  return best;
}

Snapshot Explorer::compress(SeparationState& state, const Snapshot& best, Budget& budget) {
  Snapshot incumbent = best;
  while (!budget.expired()) {
    const double r = compression_ratio(cfg_, budget.progress());
    state.restore(incumbent);
    if (!shrink(state, r)) break;
    separate(state, cfg_.m_c, cfg_.n_c, cfg_.separator, separator_rng_, budget);
    if (state.loss() == 0.0) {
      incumbent = state.snapshot();
      ++epoch_;
      emit("compress", incumbent.strip_length);
    }
  }
  state.restore(incumbent);
  return incumbent;
}

SolutionRecord solve(const StripInstance& instance, const SolverConfig& cfg, RunLimit limit, std::uint64_t seed,
                     ProgressFn progress) {
  instance.validate();
  cfg.validate();
  if (limit.iterations == 0 && !(limit.seconds > 0.0)) throw std::invalid_argument("time limit must be positive");
  const auto start = std::chrono::steady_clock::now();

  Rng construction = make_rng(seed, "construction");
  SeparationState state(construct_initial(instance, construction), cfg.separator.proxy);
  Explorer explorer(instance, cfg, seed, std::move(progress));

  Budget explore_budget = limit.phase_budget(cfg.tl_split_explore);
  const Snapshot explored = explorer.explore(state, explore_budget);
  state.restore(explored);
  Budget compress_budget = limit.phase_budget(cfg.tl_split_compress);
  const Snapshot compressed = explorer.compress(state, explored, compress_budget);
  state.restore(compressed);

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  SolutionRecord record = make_record(instance, state.layout(), seed, elapsed);
  const VerifyReport report = verify_solution(instance, to_solution_file(instance, record, limit.seconds));
  if (!report.ok()) throw std::logic_error("solver produced an infeasible layout: " + report.summary());
  return record;
}

}  // namespace nest
