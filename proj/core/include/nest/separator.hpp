#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "nest/budget.hpp"
#include "nest/cde.hpp"
#include "nest/quantify.hpp"
#include "nest/rng.hpp"
#include "nest/sampler.hpp"

namespace nest {

struct GlsConfig {
  double m_upper = 2.0;
  double m_lower = 1.2;
  double m_decay = 0.95;
  int n_workers = 3;
  /// Physical threads used for the workers; 0 picks min(n_workers, cores).
  int n_threads = 0;

  void validate() const;
};

struct SeparatorConfig {
  GlsConfig gls;
  SamplerConfig sampler;
  ProxyConfig proxy;
};

/// Index of the unordered pair {a, b}, a != b, in a strict lower-triangular array.
inline std::size_t pair_index(ItemId a, ItemId b) {
  if (a < b) std::swap(a, b);
  return a * (a - 1) / 2 + b;
}

/// Symmetric guided-local-search weights over item pairs, floored at 1.
class WeightMatrix {
 public:
  explicit WeightMatrix(std::size_t n_items = 0) : n_(n_items), w_(n_items * (n_items - (n_items > 0)) / 2, 1.0) {}

  std::size_t size() const { return n_; }
  double operator()(ItemId a, ItemId b) const { return w_[pair_index(a, b)]; }
  void set(ItemId a, ItemId b, double w) { w_[pair_index(a, b)] = w < 1.0 ? 1.0 : w; }
  void reset() { std::fill(w_.begin(), w_.end(), 1.0); }
  std::span<double> values() { return w_; }
  std::span<const double> values() const { return w_; }

 private:
  std::size_t n_;
  std::vector<double> w_;
};

/// Collision severity of every item pair in a layout, kept current item by item.
class PairCache {
 public:
  PairCache() = default;
  PairCache(const Layout& layout, const ProxyConfig& cfg) { rebuild(layout, cfg); }

  void rebuild(const Layout& layout, const ProxyConfig& cfg);
  /// Refreshes every pair involving item i after it moved.
  void update_item(const Layout& layout, ItemId i, const ProxyConfig& cfg);

  double operator()(ItemId a, ItemId b) const { return e_[pair_index(a, b)]; }
  std::span<const double> values() const { return e_; }
  double total() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> e_;
  std::vector<ItemId> scratch_;
};

/// A layout under separation: placements, GLS weights and the pair cache.
class SeparationState {
 public:
  SeparationState(Layout layout, const ProxyConfig& cfg);

  const Layout& layout() const { return layout_; }
  WeightMatrix& weights() { return weights_; }
  const WeightMatrix& weights() const { return weights_; }
  const PairCache& pairs() const { return pairs_; }
  const ProxyConfig& proxy() const { return proxy_; }

  /// Sum of all pair evaluations; 0 iff the layout is feasible.
  double loss() const { return pairs_.total(); }

  void move_item(ItemId i, const Transformation& t);
  void restore(const Snapshot& s);
  void set_strip_length(double length);
  Snapshot snapshot() const { return layout_.snapshot(); }

 private:
  Layout layout_;
  ProxyConfig proxy_;
  WeightMatrix weights_;
  PairCache pairs_;
};

/// Weighted severity of placing item i at `t`: sum over prospective
/// colliders c of w_ic * quantify_collision. Zero iff collision free.
double evaluate_sample(const Layout& layout, const WeightMatrix& weights, ItemId i, const Transformation& t,
                       const ProxyConfig& cfg);

/// Unweighted sum of evaluate_item_pair over all unordered pairs.
double solution_loss(const Layout& layout, const ProxyConfig& cfg);

/// One GLS weight update from the given pair evaluations (pair_index order):
/// colliding pairs grow by M_l + (M_u - M_l) * e / e_max, the rest decay by
/// M_d; every weight stays >= 1.
void update_weights(std::span<const double> pair_evals, WeightMatrix& weights, const GlsConfig& cfg);
void update_weights(const Layout& layout, WeightMatrix& weights, const SeparatorConfig& cfg);

/// Items whose placed shape collides with at least one other item, queried
/// from the CDE.
std::vector<ItemId> colliding_items(const Layout& layout);

/// Repositions every colliding item once, in uniformly random order.
void move_items(SeparationState& state, const SeparatorConfig& cfg, Rng& rng);

/// Runs move_items from the same start in n_workers independent copies and
/// keeps the copy with the lowest loss (ties: lowest worker index).
void move_items_multi(SeparationState& state, const SeparatorConfig& cfg, Rng& rng);

/// Strike-based separation. Returns the best snapshot found (feasible iff its
/// loss is 0) and leaves `state` restored to it. The budget is ticked once
/// per iteration and only checked between iterations.
Snapshot separate(SeparationState& state, int max_strikes, int max_stale_iterations, const SeparatorConfig& cfg,
                  Rng& rng, Budget& budget);

}  // namespace nest
