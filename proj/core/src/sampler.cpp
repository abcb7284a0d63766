#include "nest/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace nest {

void SamplerConfig::validate() const {
  if (n_diverse < 1 || n_focused < 1 || n_refine < 1 || max_refine_evals < 1) {
    throw std::invalid_argument("sampler counts must be at least 1");
  }
  for (double r : {focus_radius_ratio, descent_step_init_ratio, descent_shrink, descent_step_min_ratio,
                   uniqueness_ratio}) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("sampler ratios must lie in (0, 1)");
  }
}

namespace {

constexpr int kOrientationRetries = 32;

// Draws an orientation that fits the strip; nullopt when none was found.
std::optional<Transformation> random_orientation(const Layout& layout, ItemId i, Rng& rng) {
  const Orientations& o = layout.item(i).orientations;
  for (int attempt = 0; attempt < kOrientationRetries; ++attempt) {
    Transformation t;
    t.theta = o.continuous ? uniform(rng, 0.0, 2.0 * std::numbers::pi) : o.angles[uniform_index(rng, o.angles.size())];
    t.reflected = o.allow_reflection && uniform_index(rng, 2) == 1;
    if (layout.orientation_fits(i, t)) return t;
  }
  return std::nullopt;
}

bool any_orientation_fits(const Layout& layout, ItemId i) {
  const Orientations& o = layout.item(i).orientations;
  if (layout.orientation_fits(i, layout.placement(i))) return true;
  if (o.continuous) return false;
  for (double a : o.angles) {
    for (bool r : {false, true}) {
      if (r && !o.allow_reflection) continue;
      if (layout.orientation_fits(i, Transformation{0.0, 0.0, a, r})) return true;
    }
  }
  return false;
}

Transformation diverse_sample(const Layout& layout, ItemId i, Rng& rng) {
  Transformation t = random_orientation(layout, i, rng).value_or(layout.placement(i).linear_part());
  const BBox b = layout.local_bounds(i, t);
  t.dx = uniform(rng, -b.min_x, std::max(-b.min_x, layout.strip_length() - b.max_x));
  t.dy = uniform(rng, -b.min_y, std::max(-b.min_y, layout.strip_height() - b.max_y));
  return layout.clamp(i, t);
}

Transformation focused_sample(const Layout& layout, ItemId i, Rng& rng, const SamplerConfig& cfg) {
  const Transformation& current = layout.placement(i);
  const double diameter = layout.item(i).shape->diameter();
  const double radius = cfg.focus_radius_ratio * diameter;
  Transformation t = current;
  if (layout.item(i).orientations.continuous) {
    const double span = cfg.focus_radius_ratio * std::numbers::pi;
    Transformation rotated = t;
    rotated.theta = normalize_angle(t.theta + uniform(rng, -span, span));
    if (layout.orientation_fits(i, rotated)) t = rotated;
  }
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  t.dx += r * std::cos(phi);
  t.dy += r * std::sin(phi);
  return layout.clamp(i, t);
}

bool sufficiently_different(const Sample& a, const Sample& b, double min_distance, bool discrete) {
  if (discrete && (a.t.theta != b.t.theta || a.t.reflected != b.t.reflected)) return true;
  return std::hypot(a.t.dx - b.t.dx, a.t.dy - b.t.dy) > min_distance;
}

}  // namespace

Sample refine(const Layout& layout, const Sample& start, const EvalFn& eval, Rng& rng, const SamplerConfig& cfg) {
  const ItemId i = start.item;
  const double diameter = layout.item(i).shape->diameter();
  const bool rotates = layout.item(i).orientations.continuous;
  const double step_min = cfg.descent_step_min_ratio * diameter;
  double step = cfg.descent_step_init_ratio * diameter;
  Sample best = start;
  int evals = 0;

  std::array<int, 3> axes{0, 1, 2};
  const std::size_t n_axes = rotates ? 3 : 2;
  while (step >= step_min && best.eval > 0.0 && evals < cfg.max_refine_evals) {
    std::shuffle(axes.begin(), axes.begin() + static_cast<std::ptrdiff_t>(n_axes), rng);
    bool improved = false;
    for (std::size_t k = 0; k < n_axes && evals < cfg.max_refine_evals; ++k) {
      std::optional<Sample> axis_best;
      for (double sign : {1.0, -1.0}) {
        Transformation t = best.t;
        switch (axes[k]) {
          case 0: t.dx += sign * step; break;
          case 1: t.dy += sign * step; break;
          default:
            t.theta = normalize_angle(t.theta + sign * step / (0.5 * diameter));
            if (!layout.orientation_fits(i, t)) continue;
            break;
        }
        t = layout.clamp(i, t);
        if (t == best.t) continue;
        const double e = eval(i, t);
        ++evals;
        if (!axis_best || e < axis_best->eval) axis_best = Sample{i, t, e};
      }
      if (axis_best && axis_best->eval < best.eval) {
        best = *axis_best;
        improved = true;
      }
    }
    if (!improved) step *= cfg.descent_shrink;
  }
  return best;
}

Transformation search_position(const Layout& layout, ItemId i, const EvalFn& eval, Rng& rng,
                               const SamplerConfig& cfg) {
  if (!any_orientation_fits(layout, i)) throw LayoutError("item fits the strip in no allowed orientation");

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(cfg.n_diverse + cfg.n_focused + 1));
  const Sample incumbent{i, layout.placement(i), eval(i, layout.placement(i))};
  samples.push_back(incumbent);
  if (incumbent.eval <= 0.0) return incumbent.t;

  for (int k = 0; k < cfg.n_diverse; ++k) {
    const Transformation t = diverse_sample(layout, i, rng);
    samples.push_back({i, t, eval(i, t)});
    if (samples.back().eval <= 0.0) return t;
  }
  for (int k = 0; k < cfg.n_focused; ++k) {
    const Transformation t = focused_sample(layout, i, rng, cfg);
    samples.push_back({i, t, eval(i, t)});
    if (samples.back().eval <= 0.0) return t;
  }

  std::stable_sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.eval < b.eval; });

  const double min_distance = cfg.uniqueness_ratio * layout.item(i).shape->diameter();
  const bool discrete = !layout.item(i).orientations.continuous;
  std::vector<Sample> selected;
  for (const Sample& s : samples) {
    if (static_cast<int>(selected.size()) >= cfg.n_refine) break;
    const bool distinct = std::all_of(selected.begin(), selected.end(), [&](const Sample& o) {
      return sufficiently_different(s, o, min_distance, discrete);
    });
    if (distinct) selected.push_back(s);
  }

  Sample best = incumbent;
  for (const Sample& s : selected) {
    const Sample refined = refine(layout, s, eval, rng, cfg);
    if (refined.eval < best.eval) best = refined;
    if (best.eval <= 0.0) break;
  }
  return best.t;
}

}  // namespace nest
