// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
//   nest_acceptance properties   criteria 1, 3, 4, 5, 6, 11
//   nest_acceptance benchmarks   criteria 2, 7, 8, 9, 10, 12 (ESICUP data)
//   nest_acceptance all

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nest/instance_io.hpp"
#include "nest/quantify.hpp"
#include "nest/separator.hpp"
#include "nest/solution_io.hpp"
#include "nest/strip.hpp"
#include "nest/verify.hpp"
#include "oracles.hpp"

#ifndef NEST_ESICUP_DEFAULT_DIR
#define NEST_ESICUP_DEFAULT_DIR "data/esicup"
#endif

namespace fs = std::filesystem;
using namespace nest;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  if (!ok) ++failures;
  fmt::print("{} criterion {:>2}: {} | {}\n", ok ? "PASS" : "FAIL", id, title, detail);
  std::fflush(stdout);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- 1 ----------------------------------------------------------------------

void collision_oracle_equivalence() {
  const auto start = Clock::now();
  const auto pool = testing::shape_pool(2024, 60);
  Rng rng(1);
  long layouts = 0, pairs = 0, overlapping = 0, banded = 0, missed = 0, spurious = 0;
  for (; layouts < 10000; ++layouts) {
    const std::size_t n = 2 + uniform_index(rng, 7);
    const double height = uniform(rng, 4.2, 6.0);
    const double length = uniform(rng, 4.2, 3.0 + 1.5 * static_cast<double>(n));
    const Layout l = testing::random_layout(rng, pool, n, length, height);
    for (ItemId a = 0; a < l.size(); ++a) {
      const std::vector<ItemId> hits = l.collisions(l.placed_shape(a), a);
      for (ItemId b = 0; b < l.size(); ++b) {
        if (b == a) continue;
        ++pairs;
        const auto rel = testing::brute_force_relation(l.placed_shape(a), l.placed_shape(b));
        overlapping += rel.overlap;
        const bool got = std::binary_search(hits.begin(), hits.end(), b);
        const double band =
            kCollisionEpsilonRatio * std::max(l.placed_shape(a).diameter(), l.placed_shape(b).diameter());
        if (!rel.overlap && rel.separation < band) {
          ++banded;
        } else if (rel.overlap && !got) {
          ++missed;
        } else if (!rel.overlap && got) {
          ++spurious;
        }
      }
    }
  }
  const double t = seconds_since(start);
  report(1, missed == 0 && spurious == 0 && t < 120.0, "collision-oracle equivalence",
         fmt::format("{} layouts, {} ordered pairs ({} overlapping), {} missed, {} spurious, {} inside the band, {:.1f} s (limit 120 s)",
                     layouts, pairs, overlapping, missed, spurious, banded, t));
}

// --- 3 ----------------------------------------------------------------------

void quantification_suite() {
  std::vector<std::string> problems;
  for (double eps : {1e-6, 1e-3, 0.02, 1.0, 300.0}) {
    const double h = 1e-9 * eps;
    if (std::abs(decayed_pd(eps - h, eps) - decayed_pd(eps + h, eps)) > 1e-6 * eps) {
      problems.push_back(fmt::format("discontinuous at eps={}", eps));
    }
    if (decayed_pd(0.0, eps) != eps / 2) problems.push_back(fmt::format("pd(0) != eps/2 at eps={}", eps));
    double prev = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double delta = -100 * eps + 200 * eps * k / 9999.0;
      const double v = decayed_pd(delta, eps);
      if (!(v > 0.0)) problems.push_back(fmt::format("non-positive at delta={}", delta));
      if (k > 0 && !(v > prev)) problems.push_back(fmt::format("not increasing at delta={}", delta));
      prev = v;
    }
  }

  const auto pool = testing::shape_pool(77, 40);
  Rng rng(3);
  const ProxyConfig cfg;
  double worst_sym = 0.0, worst_rigid = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Polygon a = transform(*pool[uniform_index(rng, pool.size())],
                                {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, 0, 6.3), false});
    const Polygon b = transform(*pool[uniform_index(rng, pool.size())],
                                {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, 0, 6.3), k % 2 == 0});
    const double ab = overlap_proxy_decay(a, b, cfg);
    const double ba = overlap_proxy_decay(b, a, cfg);
    worst_sym = std::max(worst_sym, std::abs(ab - ba) / ab);
    const Transformation m{uniform(rng, -50, 50), uniform(rng, -50, 50), uniform(rng, 0, 6.3), k % 3 == 0};
    const double q = quantify_collision(a, b, cfg);
    const double qm = quantify_collision(transform(a, m), transform(b, m), cfg);
    worst_rigid = std::max(worst_rigid, std::abs(q - qm) / q);
  }
  if (worst_sym > 1e-6) problems.push_back(fmt::format("proxy asymmetry {:.2e}", worst_sym));
  if (worst_rigid > 1e-6) problems.push_back(fmt::format("rigid-motion drift {:.2e}", worst_rigid));
  report(3, problems.empty(), "quantification suite",
         problems.empty() ? fmt::format("5 thresholds x 1e4 points; 1000 pairs, max asymmetry {:.1e}, max rigid drift "
                                        "{:.1e} (limit 1e-6)",
                                        worst_sym, worst_rigid)
                          : problems.front() + fmt::format(" (+{} more)", problems.size() - 1));
}

// --- 4 ----------------------------------------------------------------------

void weight_dynamics() {
  Rng rng(4);
  const GlsConfig cfg;
  long below_floor = 0, not_doubled = 0, updates = 0;
  for (int seq = 0; seq < 100000; ++seq) {
    const std::size_t n = 2 + uniform_index(rng, 5);
    WeightMatrix w(n);
    const std::size_t steps = 1 + uniform_index(rng, 12);
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<double> e(w.values().size());
      for (double& x : e) x = uniform_index(rng, 3) == 0 ? 0.0 : uniform(rng, 0.0, 10.0);
      const std::vector<double> before(w.values().begin(), w.values().end());
      update_weights(e, w, cfg);
      ++updates;
      const double e_max = *std::max_element(e.begin(), e.end());
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (w.values()[k] < 1.0) ++below_floor;
        if (e_max > 0.0 && e[k] == e_max && w.values()[k] != before[k] * 2.0) ++not_doubled;
      }
    }
  }
  report(4, below_floor == 0 && not_doubled == 0, "weight dynamics",
         fmt::format("1e5 sequences, {} updates, {} weights below 1, {} e=e_max pairs not doubled", updates,
                     below_floor, not_doubled));
}

// --- 5 ----------------------------------------------------------------------

void determinism() {
  std::vector<std::string> mismatches;
  for (const char* name : {"mixed.json", "rects.json"}) {
    const StripInstance inst = testing::load_data_instance(name);
    SolverConfig cfg;
    cfg.separator.gls.n_workers = 3;
    const SolutionRecord a = solve(inst, cfg, RunLimit::iters(600), 21);
    const SolutionRecord b = solve(inst, cfg, RunLimit::iters(600), 21);
    cfg.separator.gls.n_threads = 1;
    const SolutionRecord c = solve(inst, cfg, RunLimit::iters(600), 21);
    if (a.hash() != b.hash() || a.hash() != c.hash()) mismatches.push_back(name);
  }
  report(5, mismatches.empty(), "determinism",
         mismatches.empty() ? "2 instances, 600-iteration budget, 3 workers: identical record hashes (also with 1 thread)"
                            : "hash mismatch on " + mismatches.front());
}

// --- 6 ----------------------------------------------------------------------

// Reference model: plain values, every operation returns a new state.
struct Model {
  double length = 0.0;
  std::vector<Transformation> placements;
};

Model model_move(Model m, ItemId i, const Transformation& t) {
  m.placements[i] = t;
  return m;
}

Model model_set_length(Model m, double length, const std::vector<ItemSpec>& items) {
  for (ItemId i = 0; i < m.placements.size(); ++i) {
    Transformation& t = m.placements[i];
    const double over = transform(*items[i].shape, t).bbox().max_x - length;
    if (over > 0.0) {
      t.dx -= over;
      const double under = -transform(*items[i].shape, t).bbox().min_x;
      if (under > 0.0) t.dx += under;
    }
  }
  m.length = length;
  return m;
}

void snapshot_model() {
  const auto pool = testing::shape_pool(66, 12);
  Rng rng(6);
  Layout layout = testing::random_layout(rng, pool, 12, 14.0, 5.0);
  std::vector<ItemSpec> items;
  for (ItemId i = 0; i < layout.size(); ++i) items.push_back(layout.item(i));
  Model model{layout.strip_length(), layout.placements()};
  std::vector<std::pair<Snapshot, Model>> saved{{layout.snapshot(), model}};
  double max_width = 0.0;
  for (const ItemSpec& it : items) max_width = std::max(max_width, it.shape->diameter());

  long ops = 0, mismatches = 0, queries = 0;
  std::string first;
  for (; ops < 10000; ++ops) {
    const std::size_t op = uniform_index(rng, 10);
    if (op < 5) {
      const ItemId i = uniform_index(rng, layout.size());
      const Transformation t =
          testing::random_contained_transform(rng, *items[i].shape, layout.strip_length(), layout.strip_height());
      layout.move_item(i, t);
      model = model_move(model, i, t);
    } else if (op < 7) {
      saved.emplace_back(layout.snapshot(), model);
    } else if (op < 9) {
      const auto& [s, m] = saved[uniform_index(rng, saved.size())];
      layout.restore(s);
      model = m;
    } else {
      const double length = uniform(rng, max_width, 16.0);
      layout.set_strip_length(length);
      model = model_set_length(model, length, items);
    }
    bool same = layout.strip_length() == model.length && layout.placements() == model.placements;
    if (same && ops % 10 == 0) {
      // Query results must equal those of a layout built from scratch.
      const Layout fresh(items, layout.strip_height(), model.length, model.placements);
      for (ItemId a = 0; a < layout.size(); ++a) {
        ++queries;
        same = same && layout.collisions(layout.placed_shape(a), a) == fresh.collisions(fresh.placed_shape(a), a);
      }
    }
    if (!same) {
      ++mismatches;
      if (first.empty()) first = fmt::format("first mismatch at op {}", ops);
    }
  }
  report(6, mismatches == 0, "snapshot/restore model test",
         fmt::format("{} operations, {} collision queries vs fresh rebuild, {} mismatches{}", ops, queries, mismatches,
                     first.empty() ? "" : ", " + first));
}

// --- 11 ---------------------------------------------------------------------

void two_squares() {
  const StripInstance inst = testing::square_instance(2, 1.0001);
  const SolutionRecord r = solve(inst, {}, RunLimit::time(10.0), 0);
  report(11, r.density >= 95.0, "two-square analytic check",
         fmt::format("rho = {:.4f} (target >= 95), l = {:.6f}, 10 s", r.density, r.strip_length));
}

// --- benchmarks ---------------------------------------------------------------

const std::vector<std::string> kEsicup = {"albano", "dagli",   "fu",      "jakobs1", "jakobs2", "mao",     "marques",
                                          "shapes0", "shapes1", "shapes2", "shirts",  "swim",    "trousers"};

fs::path esicup_dir() {
  if (const char* env = std::getenv("NEST_ESICUP_DIR"); env && *env) return env;
  return NEST_ESICUP_DEFAULT_DIR;
}

std::optional<StripInstance> load_esicup(const std::string& name, std::string& why) {
  const fs::path p = esicup_dir() / (name + ".json");
  if (!fs::exists(p)) {
    why = fmt::format("instance file {} not found (set NEST_ESICUP_DIR)", p.string());
    return std::nullopt;
  }
  try {
    return load_instance(p);
  } catch (const std::exception& e) {
    why = fmt::format("{}: {}", p.string(), e.what());
    return std::nullopt;
  }
}

struct RunResult {
  double density = 0.0;
  bool verified = false;
};

RunResult run_once(const StripInstance& inst, double seconds, std::uint64_t seed) {
  const SolutionRecord r = solve(inst, {}, RunLimit::time(seconds), seed);
  const VerifyReport v = verify_solution(inst, to_solution_file(inst, r, seconds));
  return {r.density, v.ok()};
}

void esicup_gate_and_baseline() {
  std::vector<std::string> missing;
  int verified = 0, beaten = 0, loaded = 0;
  std::string worst;
  for (const std::string& name : kEsicup) {
    std::string why;
    auto inst = load_esicup(name, why);
    if (!inst) {
      missing.push_back(why);
      continue;
    }
    ++loaded;
    const RunResult r = run_once(*inst, 60.0, 0);
    Rng construction = make_rng(0, "construction");
    const double baseline = density(*inst, construct_initial(*inst, construction).strip_length());
    verified += r.verified;
    if (r.density > baseline) {
      ++beaten;
    } else if (worst.empty()) {
      worst = fmt::format("{}: {:.3f} <= baseline {:.3f}", name, r.density, baseline);
    }
  }
  const int total = static_cast<int>(kEsicup.size());
  const std::string missing_note =
      missing.empty() ? "" : fmt::format("; {} of {} instances unavailable, e.g. {}", missing.size(), total, missing[0]);
  report(2, loaded == total && verified == total, "feasibility gate on the 13 ESICUP instances",
         fmt::format("{} of {} solutions verified{}", verified, total, missing_note));
  report(10, loaded == total && beaten == total, "baseline dominance (60 s vs bottom-left fill)",
         fmt::format("{} of {} instances beat the construction density{}{}", beaten, total,
                     worst.empty() ? "" : "; " + worst, missing_note));
}

void quality_target(int id, const std::string& name, bool inflate, double threshold,
                    std::vector<double>* densities_out) {
  std::string why;
  auto inst = load_esicup(name, why);
  if (!inst) {
    report(id, false, fmt::format("{} median rho >= {}", name, threshold), why);
    return;
  }
  if (inflate) *inst = inflate_strip(std::move(*inst));
  std::vector<double> rho;
  bool all_verified = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RunResult r = run_once(*inst, 1200.0, seed);
    rho.push_back(r.density);
    all_verified = all_verified && r.verified;
  }
  const double m = median(rho);
  if (densities_out) *densities_out = rho;
  report(id, all_verified && m >= threshold, fmt::format("{} median rho >= {}", name, threshold),
         fmt::format("median {:.3f} over 5 seeds x 20 min (runs: {:.3f})", m, fmt::join(rho, ", ")));
}

void time_scaling(const std::vector<double>& long_runs) {
  std::string why;
  auto inst = load_esicup("shirts", why);
  if (!inst || long_runs.size() != 5) {
    report(12, false, "time scaling on SHIRTS (20 min >= 2 min)", inst ? "20-minute runs unavailable" : why);
    return;
  }
  std::vector<double> short_runs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) short_runs.push_back(run_once(*inst, 120.0, seed).density);
  const double a = median(short_runs), b = median(long_runs);
  report(12, b >= a, "time scaling on SHIRTS (20 min >= 2 min)",
         fmt::format("median {:.3f} at 2 min, {:.3f} at 20 min", a, b));
}

void benchmarks() {
  esicup_gate_and_baseline();
  quality_target(7, "fu", false, 88.0, nullptr);
  quality_target(8, "shapes0", true, 64.5, nullptr);
  std::vector<double> shirts;
  quality_target(9, "shirts", false, 85.5, &shirts);
  time_scaling(shirts);
}

void properties() {
  collision_oracle_equivalence();
  quantification_suite();
  weight_dynamics();
  determinism();
  snapshot_model();
  two_squares();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string group = argc > 1 ? argv[1] : "all";
  if (group != "properties" && group != "benchmarks" && group != "all") {
    fmt::print(stderr, "usage: {} [properties|benchmarks|all]\n", argv[0]);
    return 2;
  }
  try {
    if (group != "benchmarks") properties();
    if (group != "properties") benchmarks();
  } catch (const std::exception& e) {
    fmt::print("FAIL aborted: {}\n", e.what());
    return 1;
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
