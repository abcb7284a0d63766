#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "nest/separator.hpp"
#include "oracles.hpp"

namespace nest {
namespace {

std::shared_ptr<const Polygon> square(double side) {
  const double h = side / 2;
  return std::make_shared<const Polygon>(Polygon::create({{-h, -h}, {h, -h}, {h, h}, {-h, h}}));
}

Layout squares(const std::vector<Transformation>& at, double length, double height, double side = 1.0) {
  auto s = square(side);
  std::vector<ItemSpec> items;
  for (std::size_t k = 0; k < at.size(); ++k) {
    Orientations o;
    o.continuous = true;
    items.push_back({s, o, 0});
  }
  return Layout(items, height, length, at);
}

TEST(PairIndex, CoversLowerTriangleOnce) {
  std::vector<int> seen(45, 0);
  for (ItemId a = 0; a < 10; ++a) {
    for (ItemId b = 0; b < 10; ++b) {
      if (a == b) continue;
      EXPECT_EQ(pair_index(a, b), pair_index(b, a));
      if (a < b) ++seen[pair_index(a, b)];
    }
  }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(UpdateWeights, PaperMultipliers) {
  // Pairs in index order: {1,0}, {2,0}, {2,1}.
  WeightMatrix w(3);
  const GlsConfig cfg;
  const std::vector<double> evals{8.0, 4.0, 0.0};
  update_weights(evals, w, cfg);
  EXPECT_EQ(w(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(w(0, 2), 1.6);
  EXPECT_EQ(w(1, 2), 1.0);
}

TEST(UpdateWeights, DecayIsGeometricUntilFloor) {
  WeightMatrix w(2);
  w.set(0, 1, 10.0);
  const GlsConfig cfg;
  const std::vector<double> none{0.0};
  double expected = 10.0;
  for (int k = 1; k <= 80; ++k) {
    update_weights(none, w, cfg);
    expected = std::max(1.0, expected * cfg.m_decay);
    EXPECT_EQ(w(0, 1), expected) << "k=" << k;
    EXPECT_NEAR(w(0, 1), std::max(1.0, 10.0 * std::pow(cfg.m_decay, k)), 1e-12 * 10.0);
  }
  EXPECT_EQ(w(0, 1), 1.0);
}

TEST(UpdateWeights, AllZeroEvalsOnlyDecay) {
  WeightMatrix w(3);
  w.set(0, 1, 4.0);
  update_weights(std::vector<double>{0.0, 0.0, 0.0}, w, GlsConfig{});
  EXPECT_DOUBLE_EQ(w(0, 1), 3.8);
  EXPECT_EQ(w(0, 2), 1.0);
}

TEST(UpdateWeights, LayoutOverloadMatchesPairEvaluations) {
  const Layout l = squares({{1, 1, 0, false}, {1.5, 1.2, 0, false}, {1.2, 1.6, 0, false}, {6, 1, 0, false}}, 10, 4);
  const SeparatorConfig cfg;
  WeightMatrix a(l.size()), b(l.size());
  update_weights(l, a, cfg);
  std::vector<double> evals(l.size() * (l.size() - 1) / 2);
  for (ItemId i = 0; i < l.size(); ++i) {
    for (ItemId j = 0; j < i; ++j) evals[pair_index(i, j)] = evaluate_item_pair(l, i, j, cfg.proxy);
  }
  update_weights(evals, b, cfg.gls);
  for (ItemId i = 0; i < l.size(); ++i) {
    for (ItemId j = 0; j < i; ++j) EXPECT_DOUBLE_EQ(a(i, j), b(i, j));
  }
}

TEST(GlsConfig, ValidateOrdering) {
  GlsConfig c;
  EXPECT_NO_THROW(c.validate());
  c.m_lower = 2.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.m_decay = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.n_workers = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(EvaluateSample, ZeroWhenCollisionFree) {
  const Layout l = squares({{1, 1, 0, false}, {5, 1, 0, false}}, 10, 4);
  const WeightMatrix w(2);
  EXPECT_EQ(evaluate_sample(l, w, 0, {2.5, 2.5, 0, false}, {}), 0.0);
}

TEST(EvaluateSample, LinearInSoleColliderWeight) {
  const Layout l = squares({{1, 1, 0, false}, {5, 1, 0, false}}, 10, 4);
  WeightMatrix w(2);
  const Transformation t{4.6, 1.2, 0.1, false};
  const double base = evaluate_sample(l, w, 0, t, {});
  EXPECT_GT(base, 0.0);
  w.set(0, 1, 2.0);
  EXPECT_DOUBLE_EQ(evaluate_sample(l, w, 0, t, {}), 2.0 * base);
}

TEST(EvaluateSample, UnitWeightsEqualIndependentSum) {
  const auto pool = testing::shape_pool(31, 20);
  Rng rng(6);
  const ProxyConfig cfg;
  for (int k = 0; k < 1000; ++k) {
    const Layout l = testing::random_layout(rng, pool, 8, 8, 5);
    const WeightMatrix w(l.size());
    const ItemId i = uniform_index(rng, l.size());
    const Transformation t = testing::random_contained_transform(rng, *l.item(i).shape, 8, 5);
    const Polygon placed = transform(*l.item(i).shape, t);
    double expected = 0.0;
    for (ItemId c : l.collisions(placed, i)) expected += quantify_collision(placed, l.placed_shape(c), cfg);
    EXPECT_NEAR(evaluate_sample(l, w, i, t, cfg), expected, 1e-12 * (1 + expected));
  }
}

TEST(SolutionLoss, FeasibleIsZeroAndSinglePairIsItsSeverity) {
  const ProxyConfig cfg;
  const Layout apart = squares({{1, 1, 0, false}, {3, 1, 0, false}, {5, 1, 0, false}}, 10, 4);
  EXPECT_EQ(solution_loss(apart, cfg), 0.0);
  const Layout one = squares({{1, 1, 0, false}, {1.7, 1.3, 0, false}, {5, 1, 0, false}}, 10, 4);
  EXPECT_DOUBLE_EQ(solution_loss(one, cfg), quantify_collision(one.placed_shape(0), one.placed_shape(1), cfg));
}

TEST(SolutionLoss, MatchesBruteForceAndIncrementalCache) {
  const auto pool = testing::shape_pool(12, 20);
  Rng rng(15);
  const ProxyConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    SeparationState st(testing::random_layout(rng, pool, 15, 10, 5), cfg);
    for (int step = 0; step < 30; ++step) {
      const ItemId i = uniform_index(rng, st.layout().size());
      st.move_item(i, testing::random_contained_transform(rng, *st.layout().item(i).shape, 10, 5));
      const double brute = testing::brute_force_loss(st.layout(), cfg);
      EXPECT_NEAR(solution_loss(st.layout(), cfg), brute, 1e-9 * (1 + brute));
      EXPECT_NEAR(st.loss(), brute, 1e-9 * (1 + brute));
    }
    const Snapshot s = st.snapshot();
    st.set_strip_length(9.0);
    EXPECT_NEAR(st.loss(), testing::brute_force_loss(st.layout(), cfg), 1e-9 * (1 + st.loss()));
    st.restore(s);
    EXPECT_NEAR(st.loss(), testing::brute_force_loss(st.layout(), cfg), 1e-9 * (1 + st.loss()));
  }
}

TEST(CollidingItems, ListsOnlyItemsWithPartners) {
  const Layout l = squares({{1, 1, 0, false}, {1.5, 1, 0, false}, {5, 1, 0, false}}, 10, 4);
  EXPECT_EQ(colliding_items(l), (std::vector<ItemId>{0, 1}));
  const Layout apart = squares({{1, 1, 0, false}, {3, 1, 0, false}}, 10, 4);
  EXPECT_TRUE(colliding_items(apart).empty());
}

TEST(MoveItems, FeasibleLayoutDoesNotMove) {
  SeparationState st(squares({{1, 1, 0, false}, {3, 1, 0, false}}, 10, 4), {});
  Rng rng(1);
  const auto before = st.layout().placements();
  move_items(st, {}, rng);
  EXPECT_EQ(st.layout().placements(), before);
}

TEST(MoveItems, ReducesLossOnEasyPair) {
  int improved = 0;
  for (int seed = 0; seed < 100; ++seed) {
    SeparationState st(squares({{5, 5, 0, false}, {5.3, 5.2, 0, false}}, 20, 10), {});
    Rng rng(static_cast<std::uint64_t>(seed));
    const double before = st.loss();
    move_items(st, {}, rng);
    if (st.loss() < before) ++improved;
  }
  EXPECT_GE(improved, 95);
}

TEST(MoveItemsMulti, SingleWorkerMatchesMoveItems) {
  const auto pool = testing::shape_pool(3, 10);
  Rng setup(2);
  const Layout l = testing::random_layout(setup, pool, 10, 8, 5);
  SeparatorConfig cfg;
  cfg.gls.n_workers = 1;
  SeparationState a(l, cfg.proxy), b(l, cfg.proxy);
  Rng ra(77), rb(77);
  move_items_multi(a, cfg, ra);
  move_items(b, cfg, rb);
  EXPECT_EQ(a.layout().placements(), b.layout().placements());
}

TEST(MoveItemsMulti, KeepsBestWorkerAndIgnoresThreadCount) {
  const auto pool = testing::shape_pool(3, 10);
  Rng setup(5);
  const Layout l = testing::random_layout(setup, pool, 12, 8, 5);
  SeparatorConfig cfg;
  cfg.gls.n_workers = 4;

  // Reference: run every worker by hand with the seeds the call would draw.
  Rng seeds(99);
  double min_loss = INFINITY;
  for (int k = 0; k < 4; ++k) {
    SeparationState w(l, cfg.proxy);
    Rng wr(seeds());
    move_items(w, cfg, wr);
    min_loss = std::min(min_loss, w.loss());
  }

  std::vector<std::vector<Transformation>> results;
  for (int threads : {1, 2, 4}) {
    cfg.gls.n_threads = threads;
    SeparationState st(l, cfg.proxy);
    Rng rng(99);
    move_items_multi(st, cfg, rng);
    EXPECT_EQ(st.loss(), min_loss);
    results.push_back(st.layout().placements());
  }
  EXPECT_EQ(results[0], results[1]);
  EXPECT_EQ(results[0], results[2]);
}

TEST(Separate, FeasibleInputReturnsImmediately) {
  SeparationState st(squares({{1, 1, 0, false}, {3, 1, 0, false}}, 10, 4), {});
  const Snapshot in = st.snapshot();
  Rng rng(1);
  Budget budget = Budget::iterations(100);
  const Snapshot out = separate(st, 3, 200, {}, rng, budget);
  EXPECT_EQ(out, in);
  EXPECT_EQ(budget.iterations(), 0u);
}

TEST(Separate, EasyPairBecomesFeasibleWithinOneSecond) {
  for (int seed = 0; seed < 5; ++seed) {
    SeparationState st(squares({{1, 1, 0, false}, {1.4, 1.3, 0, false}}, 6, 2), {});
    Rng rng(static_cast<std::uint64_t>(seed));
    Budget budget = Budget::seconds(1.0);
    const auto start = std::chrono::steady_clock::now();
    separate(st, 3, 200, {}, rng, budget);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(st.loss(), 0.0);
    EXPECT_LT(elapsed, 1.0);
  }
}

TEST(Separate, ResultNeverWorseAndMonotoneInBudget) {
  const auto pool = testing::shape_pool(8, 12);
  Rng setup(10);
  const Layout l = testing::random_layout(setup, pool, 14, 9, 5);
  SeparatorConfig cfg;
  cfg.gls.n_threads = 1;
  const double input = SeparationState(l, cfg.proxy).loss();
  double prev = input;
  for (std::uint64_t iters = 1; iters <= 12; ++iters) {
    SeparationState st(l, cfg.proxy);
    Rng rng(4);
    Budget budget = Budget::iterations(iters);
    const Snapshot out = separate(st, 3, 200, cfg, rng, budget);
    EXPECT_EQ(st.snapshot(), out);
    EXPECT_LE(st.loss(), prev) << "iterations " << iters;
    prev = st.loss();
  }
  EXPECT_LE(prev, input);
}

TEST(Separate, ZeroLossIffOracleFindsNoOverlap) {
  const auto pool = testing::shape_pool(27, 10);
  Rng rng(3);
  SeparatorConfig cfg;
  cfg.gls.n_workers = 1;
  int feasible = 0;
  for (int trial = 0; trial < 8; ++trial) {
    SeparationState st(testing::random_layout(rng, pool, 8, 14, 6), cfg.proxy);
    Budget budget = Budget::iterations(300);
    separate(st, 3, 50, cfg, rng, budget);
    const Layout& l = st.layout();
    bool oracle_overlap = false;
    for (ItemId a = 0; a < l.size(); ++a) {
      for (ItemId b = a + 1; b < l.size(); ++b) {
        oracle_overlap = oracle_overlap || testing::brute_force_relation(l.placed_shape(a), l.placed_shape(b)).overlap;
      }
    }
    EXPECT_EQ(st.loss() == 0.0, solution_loss(l, cfg.proxy) == 0.0);
    if (st.loss() == 0.0) {
      ++feasible;
      EXPECT_FALSE(oracle_overlap);
    } else {
      EXPECT_FALSE(colliding_items(l).empty());
    }
  }
  EXPECT_GT(feasible, 0);
}

TEST(Separate, RejectsBadLimits) {
  SeparationState st(squares({{1, 1, 0, false}}, 10, 4), {});
  Rng rng(1);
  Budget budget = Budget::unlimited();
  EXPECT_THROW(separate(st, 0, 10, {}, rng, budget), std::invalid_argument);
  EXPECT_THROW(separate(st, 1, 0, {}, rng, budget), std::invalid_argument);
}

}  // namespace
}  // namespace nest
