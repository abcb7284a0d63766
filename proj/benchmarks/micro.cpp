#include <benchmark/benchmark.h>

#include "nest/instance_io.hpp"
#include "nest/quantify.hpp"
#include "nest/sampler.hpp"
#include "nest/separator.hpp"
#include "nest/strip.hpp"

namespace {

using namespace nest;

const StripInstance& instance() {
  static const StripInstance inst = load_instance(std::string(NEST_DATA_DIR) + "/mixed.json");
  return inst;
}

// Bottom-left layout squeezed by 20% so that most items overlap.
Layout crowded_layout() {
  Rng rng = make_rng(1, "construction");
  Layout l = construct_initial(instance(), rng);
  l.set_strip_length(0.8 * l.strip_length());
  return l;
}

void BM_Construct(benchmark::State& state) {
  for (auto _ : state) {
    Rng rng = make_rng(1, "construction");
    benchmark::DoNotOptimize(construct_initial(instance(), rng).strip_length());
  }
}
BENCHMARK(BM_Construct)->Unit(benchmark::kMillisecond);

void BM_CollisionQuery(benchmark::State& state) {
  const Layout l = crowded_layout();
  std::vector<ItemId> out;
  ItemId i = 0;
  for (auto _ : state) {
    l.collisions_into(l.placed_shape(i), i, out);
    benchmark::DoNotOptimize(out.data());
    i = (i + 1) % l.size();
  }
}
BENCHMARK(BM_CollisionQuery);

void BM_QuantifyCollision(benchmark::State& state) {
  const Layout l = crowded_layout();
  const ProxyConfig cfg;
  std::vector<std::pair<ItemId, ItemId>> pairs;
  for (ItemId a = 0; a < l.size(); ++a) {
    for (ItemId b : l.collisions(l.placed_shape(a), a)) {
      if (b > a) pairs.emplace_back(a, b);
    }
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto [a, b] = pairs[k];
    benchmark::DoNotOptimize(quantify_collision(l.placed_shape(a), l.placed_shape(b), cfg));
    k = (k + 1) % pairs.size();
  }
  state.counters["pairs"] = static_cast<double>(pairs.size());
}
BENCHMARK(BM_QuantifyCollision);

void BM_SearchPosition(benchmark::State& state) {
  const Layout l = crowded_layout();
  const ProxyConfig proxy;
  const WeightMatrix w(l.size());
  const EvalFn eval = [&](ItemId i, const Transformation& t) { return evaluate_sample(l, w, i, t, proxy); };
  Rng rng(5);
  ItemId i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_position(l, i, eval, rng));
    i = (i + 1) % l.size();
  }
}
BENCHMARK(BM_SearchPosition)->Unit(benchmark::kMicrosecond);

void BM_MoveItemsMulti(benchmark::State& state) {
  SeparatorConfig cfg;
  cfg.gls.n_threads = static_cast<int>(state.range(0));
  const SeparationState start(crowded_layout(), cfg.proxy);
  Rng rng(9);
  for (auto _ : state) {
    SeparationState s = start;
    move_items_multi(s, cfg, rng);
    benchmark::DoNotOptimize(s.loss());
  }
}
BENCHMARK(BM_MoveItemsMulti)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
