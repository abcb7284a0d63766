#include "nest/separator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace nest {

void GlsConfig::validate() const {
  if (!(m_decay < 1.0 && 1.0 < m_lower && m_lower < m_upper)) {
    throw std::invalid_argument("GLS multipliers must satisfy m_decay < 1 < m_lower < m_upper");
  }
  if (n_workers < 1) throw std::invalid_argument("n_workers must be at least 1");
  if (n_threads < 0) throw std::invalid_argument("n_threads must be non-negative");
}

// --- PairCache --------------------------------------------------------------

void PairCache::rebuild(const Layout& layout, const ProxyConfig& cfg) {
  n_ = layout.size();
  e_.assign(n_ * (n_ - (n_ > 0)) / 2, 0.0);
  for (ItemId a = 0; a < n_; ++a) {
    layout.collisions_into(layout.placed_shape(a), a, scratch_);
    for (ItemId b : scratch_) {
      if (b < a) continue;
      e_[pair_index(a, b)] = quantify_collision(layout.placed_shape(a), layout.placed_shape(b), cfg);
    }
  }
}

void PairCache::update_item(const Layout& layout, ItemId i, const ProxyConfig& cfg) {
  for (ItemId j = 0; j < n_; ++j) {
    if (j != i) e_[pair_index(i, j)] = 0.0;
  }
  layout.collisions_into(layout.placed_shape(i), i, scratch_);
  for (ItemId c : scratch_) {
    const ItemId lo = std::min(i, c);
    const ItemId hi = std::max(i, c);
    e_[pair_index(lo, hi)] = quantify_collision(layout.placed_shape(lo), layout.placed_shape(hi), cfg);
  }
}

double PairCache::total() const { return std::accumulate(e_.begin(), e_.end(), 0.0); }

// --- SeparationState --------------------------------------------------------

SeparationState::SeparationState(Layout layout, const ProxyConfig& cfg)
    : layout_(std::move(layout)), proxy_(cfg), weights_(layout_.size()), pairs_(layout_, cfg) {}

void SeparationState::move_item(ItemId i, const Transformation& t) {
  layout_.move_item(i, t);
  pairs_.update_item(layout_, i, proxy_);
}

void SeparationState::restore(const Snapshot& s) {
  if (s.strip_length != layout_.strip_length()) {
    layout_.restore(s);
    pairs_.rebuild(layout_, proxy_);
    return;
  }
  std::vector<ItemId> changed;
  for (ItemId i = 0; i < layout_.size() && i < s.placements.size(); ++i) {
    if (!(layout_.placement(i) == s.placements[i])) changed.push_back(i);
  }
  layout_.restore(s);
  for (ItemId i : changed) pairs_.update_item(layout_, i, proxy_);
}

void SeparationState::set_strip_length(double length) {
  layout_.set_strip_length(length);
  pairs_.rebuild(layout_, proxy_);
}

// --- evaluation -------------------------------------------------------------

double evaluate_sample(const Layout& layout, const WeightMatrix& weights, ItemId i, const Transformation& t,
                       const ProxyConfig& cfg) {
  thread_local Polygon moved;
  thread_local std::vector<ItemId> colliders;
  moved.assign_transformed(*layout.item(i).shape, t);
  layout.collisions_into(moved, i, colliders);
  double e = 0.0;
  for (ItemId c : colliders) e += weights(i, c) * quantify_collision(moved, layout.placed_shape(c), cfg);
  return e;
}

double solution_loss(const Layout& layout, const ProxyConfig& cfg) {
  double total = 0.0;
  std::vector<double> evals(layout.size() * (layout.size() - (layout.size() > 0)) / 2, 0.0);
  std::vector<ItemId> colliders;
  for (ItemId a = 0; a < layout.size(); ++a) {
    layout.collisions_into(layout.placed_shape(a), a, colliders);
    for (ItemId b : colliders) {
      if (b > a) evals[pair_index(a, b)] = quantify_collision(layout.placed_shape(a), layout.placed_shape(b), cfg);
    }
  }
  for (double e : evals) total += e;
  return total;
}

void update_weights(std::span<const double> pair_evals, WeightMatrix& weights, const GlsConfig& cfg) {
  std::span<double> w = weights.values();
  if (w.size() != pair_evals.size()) throw std::invalid_argument("weight and evaluation sizes differ");
  const double e_max = pair_evals.empty() ? 0.0 : *std::max_element(pair_evals.begin(), pair_evals.end());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double e = pair_evals[k];
    const double m =
        (e > 0.0 && e_max > 0.0) ? cfg.m_lower + (cfg.m_upper - cfg.m_lower) * (e / e_max) : cfg.m_decay;
    w[k] = std::max(1.0, w[k] * m);
  }
}

void update_weights(const Layout& layout, WeightMatrix& weights, const SeparatorConfig& cfg) {
  const PairCache pairs(layout, cfg.proxy);
  update_weights(pairs.values(), weights, cfg.gls);
}

// --- moves ------------------------------------------------------------------

std::vector<ItemId> colliding_items(const Layout& layout) {
  std::vector<ItemId> out;
  std::vector<ItemId> hits;
  for (ItemId i = 0; i < layout.size(); ++i) {
    // The query on an item's own placed shape reports the item itself too.
    layout.collisions_into(layout.placed_shape(i), std::nullopt, hits);
    if (hits.size() > 1) out.push_back(i);
  }
  return out;
}

void move_items(SeparationState& state, const SeparatorConfig& cfg, Rng& rng) {
  std::vector<ItemId> order = colliding_items(state.layout());
  std::shuffle(order.begin(), order.end(), rng);
  for (ItemId i : order) {
    const Layout& layout = state.layout();
    const WeightMatrix& weights = state.weights();
    const EvalFn eval = [&](ItemId item, const Transformation& t) {
      return evaluate_sample(layout, weights, item, t, cfg.proxy);
    };
    const Transformation t = search_position(layout, i, eval, rng, cfg.sampler);
    state.move_item(i, t);
  }
}

void move_items_multi(SeparationState& state, const SeparatorConfig& cfg, Rng& rng) {
  const int n = cfg.gls.n_workers;
  if (n <= 1) {
    move_items(state, cfg, rng);
    return;
  }
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (auto& s : seeds) s = rng();

  std::vector<SeparationState> workers(static_cast<std::size_t>(n), state);
  auto run = [&](std::size_t k) {
    Rng worker_rng(seeds[k]);
    move_items(workers[k], cfg, worker_rng);
  };

  int threads = cfg.gls.n_threads;
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t k = 0; k < workers.size(); ++k) run(k);
  } else {
    // Lane l runs workers l, l + threads, ...; results do not depend on the lane count.
    std::vector<std::jthread> lanes;
    for (int lane = 1; lane < threads; ++lane) {
      lanes.emplace_back([&, lane] {
        for (std::size_t k = static_cast<std::size_t>(lane); k < workers.size(); k += threads) run(k);
      });
    }
    for (std::size_t k = 0; k < workers.size(); k += threads) run(k);
  }

  std::size_t best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < workers.size(); ++k) {
    const double loss = workers[k].loss();
    if (loss < best_loss) {
      best_loss = loss;
      best = k;
    }
  }
  state = std::move(workers[best]);
}

Snapshot separate(SeparationState& state, int max_strikes, int max_stale_iterations, const SeparatorConfig& cfg,
                  Rng& rng, Budget& budget) {
  if (max_strikes < 1 || max_stale_iterations < 1) throw std::invalid_argument("separate needs m_max, n_max >= 1");
  Snapshot best = state.snapshot();
  double best_loss = state.loss();
  int strikes = 0;
  while (strikes < max_strikes && best_loss > 0.0 && !budget.expired()) {
    state.restore(best);
    bool improved = false;
    int stale = 0;
    while (stale < max_stale_iterations && best_loss > 0.0 && !budget.expired()) {
      move_items_multi(state, cfg, rng);
      update_weights(state.pairs().values(), state.weights(), cfg.gls);
      budget.tick();
      const double loss = state.loss();
      ++stale;
      if (loss < best_loss) {
        best = state.snapshot();
        best_loss = loss;
        stale = 0;
        improved = true;
      }
    }
    ++strikes;
    if (improved) strikes = 0;
  }
  state.restore(best);
  return best;
}

}  // namespace nest
