#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "harness/acceptance.hpp"
#include "mpass/classifier.hpp"
#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/expression.hpp"
#include "mpass/minimax.hpp"
#include "mpass/path.hpp"
#include "mpass/problem.hpp"
#include "mpass/serialize.hpp"
#include "mpass/tangency_sweep.hpp"

namespace {

using namespace mpass;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(std::string(flag) + ": cannot parse '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(std::string(flag) + ": empty list");
  return out;
}

Vec parse_vec(const std::string& text, const char* flag, int dim) {
  const std::vector<double> v = parse_list(text, flag);
  if (static_cast<int>(v.size()) != dim) {
    throw DimensionMismatch(std::string(flag) + ": expected " + std::to_string(dim) + " coordinates, got " +
                            std::to_string(v.size()));
  }
  return make_vec(v);
}

struct FieldArgs {
  std::string corpus;
  std::string expr;
  int dim = 0;
};

void add_field_options(CLI::App& cmd, FieldArgs& a) {
  auto* corpus = cmd.add_option("--corpus", a.corpus, "corpus function name (see `corpus list`)");
  auto* expr = cmd.add_option("--expr", a.expr, "expression in x1..xn, e.g. \"abs(x1^2-1)+x2^2\"");
  corpus->excludes(expr);
  cmd.add_option("--dim", a.dim, "dimension (required with --expr; lifts corpus functions)")->check(CLI::Range(1, 64));
}

ScalarField make_field(const FieldArgs& a) {
  if (!a.corpus.empty()) return corpus_field(a.corpus, a.dim > 0 ? a.dim : 2);
  if (a.expr.empty()) throw Error("one of --corpus or --expr is required");
  if (a.dim <= 0) throw Error("--expr requires --dim");
  return ScalarField::from_expression(Expression::parse(a.expr, a.dim), a.expr);
}

void warn_field(const ScalarField& f) {
  for (const auto& w : f.warnings()) std::cerr << "warning: " << w << "\n";
}

struct SolveArgs {
  FieldArgs field;
  std::string x_star, y_star;
  std::string barrier_center, barrier_normal;
  double barrier_radius = 0.0;
  double barrier_offset = 0.0;
  MinimaxOptions options;
  double tangency_tol = 0.05;
  std::string out_dir = ".";
  bool dump_hulls = false;
};

MountainPassProblem make_problem(const SolveArgs& a) {
  const bool explicit_geometry = !a.x_star.empty() || !a.y_star.empty() || !a.barrier_center.empty() ||
                                 !a.barrier_normal.empty();
  if (!explicit_geometry && !a.field.corpus.empty() && a.field.dim <= 2) {
    return default_problem(a.field.corpus, a.options.seed);
  }
  ScalarField f = make_field(a.field);
  warn_field(f);
  const int n = f.dim();
  if (a.x_star.empty() || a.y_star.empty()) throw Error("--x-star and --y-star are required");
  Vec x = parse_vec(a.x_star, "--x-star", n);
  Vec y = parse_vec(a.y_star, "--y-star", n);
  Barrier barrier;
  if (!a.barrier_center.empty()) {
    if (!a.barrier_normal.empty()) throw Error("--barrier-center and --barrier-normal are mutually exclusive");
    if (!(a.barrier_radius > 0.0)) throw Error("--barrier-radius must be positive");
    barrier = BallBarrier{parse_vec(a.barrier_center, "--barrier-center", n), a.barrier_radius};
  } else if (!a.barrier_normal.empty()) {
    barrier = HalfSpaceBarrier{parse_vec(a.barrier_normal, "--barrier-normal", n), a.barrier_offset};
  } else {
    throw Error("a barrier is required: --barrier-center/--barrier-radius or --barrier-normal/--barrier-offset");
  }
  return MountainPassProblem::create(std::move(f), std::move(x), std::move(y), std::move(barrier), a.options.seed);
}

std::string hulls_json(const MinimaxRun& run, const Classification& c) {
  using nlohmann::ordered_json;
  const ScalarField& f = run.problem->field();
  auto hull_entry = [&](const char* role, const Vec& x) {
    const GradientHull h = sample_hull(f, x, run.options.hull.radius, run.options.hull.count,
                                       point_seed(run.options.hull.seed, x));
    ordered_json g = ordered_json::array();
    for (const auto& w : h.generators()) g.push_back(to_std(w));
    return ordered_json{{"role", role},
                        {"center", to_std(x)},
                        {"radius", h.radius()},
                        {"generators", g},
                        {"min_norm_point", to_std(h.min_norm_point())},
                        {"diameter", h.diameter()}};
  };
  ordered_json hulls = ordered_json::array();
  if (run.path) hulls.push_back(hull_entry("path_argmax", path_argmax(*run.path, f, run.options.refine).point));
  if (c.critical_witness) hulls.push_back(hull_entry("critical_witness", c.critical_witness->point));
  for (const auto& e : c.tangency_trace) hulls.push_back(hull_entry("tangency", e.point));
  return ordered_json{{"schema", kSchemaVersion}, {"hulls", hulls}}.dump(2) + "\n";
}

int cmd_solve(const SolveArgs& a) {
  const MountainPassProblem problem = make_problem(a);
  MinimaxOptions opt = a.options;
  opt.hull.seed = opt.seed;
  const MinimaxRun run = solve(problem, opt);
  Tolerances tol;
  tol.tangency = a.tangency_tol;
  const Classification c = classify(run, tol);

  const std::filesystem::path dir(a.out_dir);
  const std::string label = a.field.corpus.empty() ? a.field.expr : a.field.corpus;
  write_text_file((dir / "report.json").string(), run_report_json(run, c, label));
  if (run.path) write_text_file((dir / "path.csv").string(), path_csv(*run.path));
  if (a.dump_hulls) write_text_file((dir / "hulls.json").string(), hulls_json(run, c));

  std::printf("c = %.10g\nverdict = %s (%s branch)\n", run.c_best, verdict_name(c.verdict), c.branch.c_str());
  if (c.critical_witness) {
    const auto& w = *c.critical_witness;
    std::printf("witness |x| = %.3e, residual = %.3e\n", w.point.norm(), w.residual);
  }
  if (!c.tangency_trace.empty()) std::printf("tangency trace entries = %zu\n", c.tangency_trace.size());
  return c.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

struct SweepArgs {
  FieldArgs field;
  std::string radii = "10,20,40,80,160";
  SweepOptions options;
  bool exhaustive = false;
  std::string out_dir = ".";
};

int cmd_sweep(const SweepArgs& a) {
  const ScalarField f = make_field(a.field);
  warn_field(f);
  if (a.exhaustive && f.dim() > 3) throw Error("--exhaustive sweeps are limited to dimension 2 or 3");
  SweepOptions opt = a.options;
  opt.radii = parse_list(a.radii, "--radii");
  if (opt.radii.size() < 4) throw Error("--radii needs at least 4 radii to extrapolate limits");
  if (a.exhaustive && f.dim() == 3 && opt.starts == 0) opt.starts = 2000;
  const SweepTrace t = sweep(f, opt);

  const std::filesystem::path dir(a.out_dir);
  write_text_file((dir / "sweep.csv").string(), sweep_csv(t));
  write_text_file((dir / "clusters.json").string(), clusters_json(t));
  std::printf("clusters = %zu\n", t.clusters.size());
  for (const auto& c : t.clusters) std::printf("  value = %.6g branches = %d\n", c.value, c.branch_count);
  return kExitOk;
}

struct CorpusArgs {
  harness::HarnessOptions options;
  std::string out_dir = ".";
};

int cmd_corpus_run(const CorpusArgs& a) {
  const harness::AcceptanceReport report = harness::run_acceptance(a.options);
  const std::filesystem::path dir(a.out_dir);
  write_text_file((dir / "scoreboard.csv").string(), harness::scoreboard_csv(report));
  write_text_file((dir / "scoreboard.md").string(), harness::scoreboard_markdown(report));
  for (const auto& c : report.criteria) {
    std::printf("[%s] %d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str());
  }
  return report.all_pass() ? kExitOk : kExitError;
}

int cmd_corpus_list() {
  for (const auto& info : corpus_catalog()) {
    std::printf("%-16s %-24s %s\n", info.name.c_str(), info.formula.c_str(), info.expected.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mpass: mountain-pass values of locally Lipschitz functions"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "compute c and classify it");
  add_field_options(*solve_cmd, solve_args.field);
  solve_cmd->add_option("--x-star", solve_args.x_star, "start point, comma separated (use --x-star=-1,0)");
  solve_cmd->add_option("--y-star", solve_args.y_star, "end point, comma separated");
  solve_cmd->add_option("--barrier-center", solve_args.barrier_center, "center of the barrier ball");
  solve_cmd->add_option("--barrier-radius", solve_args.barrier_radius, "radius of the barrier ball");
  solve_cmd->add_option("--barrier-normal", solve_args.barrier_normal, "half-space barrier {<n, x> < offset}");
  solve_cmd->add_option("--barrier-offset", solve_args.barrier_offset, "half-space offset")->capture_default_str();
  auto& mo = solve_args.options;
  solve_cmd->add_option("--eps0", mo.eps0, "first epsilon of the schedule")->capture_default_str();
  solve_cmd->add_option("--rounds", mo.rounds, "epsilon rounds, eps_j = eps0 / 2^j")->capture_default_str()
      ->check(CLI::Range(1, 64));
  solve_cmd->add_option("--hull-radius", mo.hull.radius, "gradient sampling radius")->capture_default_str();
  solve_cmd->add_option("--hull-count", mo.hull.count, "gradients per hull (0: max(2n, 16))")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--seed", mo.seed, "random seed")->capture_default_str();
  solve_cmd->add_option("--r-max", mo.r_max, "escape radius (0: 1000 * max(1, |x*|, |y*|))")->capture_default_str();
  solve_cmd->add_option("--budget", mo.budget, "iterations per round")->capture_default_str()
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--vertices", mo.vertices, "path vertices")->capture_default_str()->check(CLI::Range(3, 100000));
  solve_cmd->add_option("--tangency-tol", solve_args.tangency_tol, "tangency residual tolerance")
      ->capture_default_str();
  solve_cmd->add_option("--workers", mo.workers, "worker threads")->capture_default_str()->check(CLI::Range(1, 256));
  solve_cmd->add_option("--out-dir", solve_args.out_dir, "output directory")->capture_default_str();
  solve_cmd->add_flag("--dump-hulls", solve_args.dump_hulls, "also write hulls.json");
  solve_cmd->callback([&] { exit_code = cmd_solve(solve_args); });

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "estimate the asymptotic tangency values");
  add_field_options(*sweep_cmd, sweep_args.field);
  sweep_cmd->add_option("--radii", sweep_args.radii, "comma separated radii")->capture_default_str();
  sweep_cmd->add_option("--resolution", sweep_args.options.resolution, "angles per circle")->capture_default_str()
      ->check(CLI::Range(8, 10000000));
  sweep_cmd->add_option("--starts", sweep_args.options.starts, "sphere starts (0: 50n)")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_flag("--exhaustive", sweep_args.exhaustive, "dense sphere starts (dimension <= 3)");
  sweep_cmd->add_option("--seed", sweep_args.options.seed, "random seed")->capture_default_str();
  sweep_cmd->add_option("--workers", sweep_args.options.workers, "worker threads")->capture_default_str()
      ->check(CLI::Range(1, 256));
  sweep_cmd->add_option("--out-dir", sweep_args.out_dir, "output directory")->capture_default_str();
  sweep_cmd->callback([&] { exit_code = cmd_sweep(sweep_args); });

  CorpusArgs corpus_args;
  auto* corpus_cmd = app.add_subcommand("corpus", "benchmark corpus");
  corpus_cmd->require_subcommand(1);
  auto* run_cmd = corpus_cmd->add_subcommand("run", "run the acceptance suite and write a scoreboard");
  run_cmd->add_option("--seed", corpus_args.options.seed, "random seed")->capture_default_str();
  run_cmd->add_flag("--quick", corpus_args.options.quick, "smaller budgets and sample counts");
  run_cmd->add_option("--workers", corpus_args.options.workers, "worker threads")->capture_default_str()
      ->check(CLI::Range(1, 256));
  run_cmd->add_option("--out-dir", corpus_args.out_dir, "output directory")->capture_default_str();
  run_cmd->callback([&] { exit_code = cmd_corpus_run(corpus_args); });
  auto* list_cmd = corpus_cmd->add_subcommand("list", "list corpus functions");
  list_cmd->callback([&] { exit_code = cmd_corpus_list(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  } catch (const mpass::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return exit_code;
}
