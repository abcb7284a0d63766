#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include "nest/config_io.hpp"
#include "nest/convert.hpp"
#include "nest/instance_io.hpp"
#include "nest/solution_io.hpp"
#include "nest/strip.hpp"
#include "nest/svg.hpp"
#include "nest/verify.hpp"

namespace fs = std::filesystem;

namespace nest::cli {

namespace {

struct SolveOptions {
  double time_limit = 60.0;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
  std::optional<int> workers;
  std::optional<int> threads;
  std::string config;
  bool inflate = false;
  bool quiet = false;
};

void add_solve_flags(CLI::App& cmd, SolveOptions& o) {
  cmd.add_option("--time-limit", o.time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  cmd.add_option("--iterations", o.iterations, "Separation-iteration budget instead of a time limit");
  cmd.add_option("--workers", o.workers, "Worker states per move step (fallback: NEST_THREADS)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--threads", o.threads, "Threads running the workers (0: one per core)");
  cmd.add_option("--config", o.config, "JSON file of parameter overrides")->check(CLI::ExistingFile);
  cmd.add_flag("--inflate-strip", o.inflate, "Scale the strip height by 1.0001");
  cmd.add_flag("--quiet", o.quiet, "No progress lines");
}

SolverConfig make_config(const SolveOptions& o) {
  SolverConfig cfg;
  if (!o.config.empty()) cfg = apply_config_overrides(cfg, read_text_file(o.config));
  if (o.workers) {
    cfg.separator.gls.n_workers = *o.workers;
  } else if (const char* env = std::getenv("NEST_THREADS"); env && *env) {
    const int n = std::atoi(env);
    if (n < 1) throw IoError("NEST_THREADS must be a positive integer");
    cfg.separator.gls.n_workers = n;
  }
  if (o.threads) cfg.separator.gls.n_threads = *o.threads;
  cfg.validate();
  return cfg;
}

RunLimit make_limit(const SolveOptions& o) {
  return o.iterations > 0 ? RunLimit::iters(o.iterations) : RunLimit::time(o.time_limit);
}

ProgressFn progress_printer(const SolveOptions& o, std::ostream& err) {
  if (o.quiet) return {};
  return [&err](const ProgressEvent& e) {
    err << fmt::format("epoch={} phase={} l={:.6f} rho={:.4f} t={:.3f}\n", e.epoch, e.phase, e.strip_length,
                       e.density, e.elapsed_s);
  };
}

std::string stem_or(const StripInstance& inst, const fs::path& path) {
  return inst.name.empty() ? path.stem().string() : inst.name;
}

int cmd_solve(const std::string& instance_path, const SolveOptions& o, const std::string& out_dir, bool svg,
              std::ostream& out, std::ostream& err) {
  StripInstance inst = load_instance(instance_path);
  if (o.inflate) inst = inflate_strip(std::move(inst));
  const SolverConfig cfg = make_config(o);
  const SolutionRecord rec = solve(inst, cfg, make_limit(o), o.seed, progress_printer(o, err));
  const SolutionFile file = to_solution_file(inst, rec, o.iterations > 0 ? 0.0 : o.time_limit);

  fs::create_directories(out_dir);
  const std::string base = stem_or(inst, instance_path);
  const fs::path json_path = fs::path(out_dir) / (base + "_solution.json");
  save_solution(file, json_path);
  out << fmt::format("instance={} seed={} rho={:.4f} l={:.6f} elapsed={:.2f}s\n", base, rec.seed, rec.density,
                     rec.strip_length, rec.elapsed_s);
  out << "solution: " << json_path.string() << "\n";
  if (svg) {
    const fs::path svg_path = fs::path(out_dir) / (base + "_solution.svg");
    render_svg(inst, file, svg_path);
    out << "svg: " << svg_path.string() << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, std::ostream& out) {
  const StripInstance inst = load_instance(instance_path);
  const SolutionFile sol = load_solution(solution_path);
  const VerifyReport report = verify_solution(inst, sol);
  for (const Violation& v : report.violations) out << "violation: " << v.message << "\n";
  out << fmt::format("violations={} rho={:.6f}\n", report.violations.size(), report.density);
  out << (report.ok() ? "OK\n" : "FAILED\n");
  return report.ok() ? 0 : 1;
}

int cmd_bench(const std::string& dir, const SolveOptions& o, int runs, std::uint64_t seed_base,
              const std::string& csv_path, const std::string& solutions_dir, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no instance files in " + dir);
  const SolverConfig cfg = make_config(o);

  std::string csv = "instance,seed,rho,strip_length,elapsed_s\n";
  for (const fs::path& f : files) {
    StripInstance inst = load_instance(f);
    if (o.inflate) inst = inflate_strip(std::move(inst));
    const std::string base = stem_or(inst, f);
    for (int r = 0; r < runs; ++r) {
      const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(r);
      const SolutionRecord rec = solve(inst, cfg, make_limit(o), seed, progress_printer(o, err));
      csv += fmt::format("{},{},{},{},{}\n", base, seed, rec.density, rec.strip_length, rec.elapsed_s);
      if (!solutions_dir.empty()) {
        fs::create_directories(solutions_dir);
        save_solution(to_solution_file(inst, rec, o.iterations > 0 ? 0.0 : o.time_limit),
                      fs::path(solutions_dir) / fmt::format("{}_seed{}_solution.json", base, seed));
      }
    }
  }
  if (csv_path.empty()) {
    out << csv;
  } else {
    write_text_file(csv_path, csv);
    out << "csv: " << csv_path << "\n";
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Irregular strip packing solver"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  std::string instance_path, solution_path, out_dir = ".";
  bool svg = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--seed", solve_opts.seed, "Random seed");
  solve_cmd->add_option("--out", out_dir, "Output directory");
  solve_cmd->add_flag("--svg", svg, "Also render the solution as SVG");
  add_solve_flags(*solve_cmd, solve_opts);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a solution against its instance");
  verify_cmd->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("solution", solution_path, "Solution JSON")->required()->check(CLI::ExistingFile);

  SolveOptions bench_opts;
  std::string bench_dir, csv_path, solutions_dir;
  int runs = 1;
  std::uint64_t seed_base = 0;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Solve every instance in a directory several times");
  bench_cmd->add_option("dir", bench_dir, "Directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--runs", runs, "Seeds per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed-base", seed_base, "First seed");
  bench_cmd->add_option("--csv", csv_path, "CSV output file (default: stdout)");
  bench_cmd->add_option("--solutions", solutions_dir, "Directory for the solution files");
  add_solve_flags(*bench_cmd, bench_opts);

  std::string convert_in, convert_out;
  CLI::App* convert_cmd = app.add_subcommand("convert", "Convert ESICUP XML or jagua-rs JSON to an instance file");
  convert_cmd->add_option("input", convert_in, "Source file")->required()->check(CLI::ExistingFile);
  convert_cmd->add_option("-o,--output", convert_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve_cmd) return cmd_solve(instance_path, solve_opts, out_dir, svg, out, err);
    if (*verify_cmd) return cmd_verify(instance_path, solution_path, out);
    if (*bench_cmd) return cmd_bench(bench_dir, bench_opts, runs, seed_base, csv_path, solutions_dir, out, err);
    if (*convert_cmd) {
      const std::string doc = convert_to_instance_json(convert_in);
      if (convert_out.empty()) {
        out << doc;
      } else {
        write_text_file(convert_out, doc);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace nest::cli
