#pragma once

#include <functional>

#include "nest/cde.hpp"
#include "nest/rng.hpp"

namespace nest {

struct SamplerConfig {
  int n_diverse = 50;
  int n_focused = 25;
  int n_refine = 3;
  double focus_radius_ratio = 0.10;
  double descent_step_init_ratio = 0.025;
  double descent_shrink = 0.5;
  double descent_step_min_ratio = 0.001;
  double uniqueness_ratio = 0.10;
  /// Evaluation cap for a single refinement.
  int max_refine_evals = 400;

  /// Throws std::invalid_argument when a count is < 1 or a ratio is outside (0, 1).
  void validate() const;
};

struct Sample {
  ItemId item = 0;
  Transformation t;
  double eval = 0.0;
};

using EvalFn = std::function<double(ItemId, const Transformation&)>;

/// Best transformation found for item i: uniform samples over the strip,
/// samples around the current placement, then coordinate descent on the
/// most promising distinct ones. The current placement is always a
/// candidate, so the result never evaluates worse than it. The result
/// always keeps the item inside the strip.
Transformation search_position(const Layout& layout, ItemId i, const EvalFn& eval, Rng& rng,
                               const SamplerConfig& cfg = {});

/// Greedy axis-aligned descent with step halving. Translation (and rotation
/// for continuously rotating items) only; reflection is left as sampled.
Sample refine(const Layout& layout, const Sample& start, const EvalFn& eval, Rng& rng,
              const SamplerConfig& cfg = {});

}  // namespace nest
