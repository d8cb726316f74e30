#include "mpass/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpass/deformation.hpp"
#include "mpass/errors.hpp"
#include "mpass/parallel.hpp"

namespace mpass {

namespace {

// A hull whose min-norm point is this small relative to its generators is
// treated as containing zero.
constexpr double kNearCriticalRatio = 1e-9;

Vec project_to_ball(const Vec& x, double r) {
  const double n = x.norm();
  return n > r ? Vec(x * (r / n)) : x;
}

std::size_t snap_index(const PathMax& pm, std::size_t size) {
  std::size_t idx = pm.t < 0.5 ? pm.segment : pm.segment + 1;
  if (idx == 0) idx = 1;
  if (idx + 1 >= size) idx = size - 2;
  return idx;
}

// Vertices beyond the nominal count tolerated while the path cannot be
// trimmed without raising its value.
constexpr std::size_t kMaxExtraVertices = 16;

std::vector<bool> moving_mask(const std::vector<std::size_t>& moving, std::size_t size) {
  std::vector<bool> mask(size, false);
  for (std::size_t i : moving) mask[i] = true;
  return mask;
}

// Removes the non-moving interior vertex closest to the chord of its
// neighbours. Returns false when no vertex can be removed.
bool remove_flattest(PLPath& path, std::vector<bool>& moving, const ScalarField& f) {
  std::size_t best = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    if (i < moving.size() && moving[i]) continue;
    const Vec& a = path.vertex(i - 1);
    const Vec& b = path.vertex(i + 1);
    const Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((path.vertex(i) - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double dev = (path.vertex(i) - (a + t * ab)).norm();
    if (dev < best_dev) {
      best_dev = dev;
      best = i;
    }
  }
  if (best == 0) return false;
  std::vector<Vec> vertices = path.vertices();
  vertices.erase(vertices.begin() + static_cast<std::ptrdiff_t>(best));
  moving.erase(moving.begin() + static_cast<std::ptrdiff_t>(best));
  path = PLPath(f, std::move(vertices));
  return true;
}

}  // namespace

std::vector<double> epsilon_schedule(double eps0, int rounds) {
  if (!(eps0 > 0.0) || rounds < 1) throw Error("epsilon schedule needs eps0 > 0 and at least one round");
  std::vector<double> out;
  for (int j = 0; j < rounds; ++j) out.push_back(std::ldexp(eps0, -j));
  return out;
}

MinimaxRun start_run(const MountainPassProblem& problem, const MinimaxOptions& options) {
  if (options.vertices < 3) throw Error("minimax: at least three vertices are required");
  if (options.refine < 1) throw Error("minimax: refine must be >= 1");
  MinimaxRun run;
  run.problem = problem;
  run.options = options;
  run.epsilon_schedule = epsilon_schedule(options.eps0, options.rounds);
  run.path = PLPath::straight(problem.field(), problem.x_star(), problem.y_star(), options.vertices);
  run.c_best = path_argmax(*run.path, problem.field(), options.refine).value;
  run.r_max = options.r_max > 0.0 ? options.r_max : 1000.0 * problem.scale();
  run.max_step = 0.5 * run.path->mean_spacing();
  run.step = 0.25 * run.max_step;
  return run;
}

void minimax_round(MinimaxRun& run, double epsilon, int budget) {
  if (!run.problem || !run.path) throw Error("minimax_round: run was not started");
  if (!(epsilon > 0.0)) throw Error("minimax_round: epsilon must be positive");
  const MountainPassProblem& problem = *run.problem;
  const ScalarField& f = problem.field();
  const MinimaxOptions& opt = run.options;
  const int round_index = static_cast<int>(run.rounds.size());
  const std::size_t n_vertices = static_cast<std::size_t>(opt.vertices);
  const double step_floor = 1e-12 * problem.scale();

  RoundRecord rec;
  rec.epsilon = epsilon;
  PLPath path = *run.path;
  std::vector<Vec> high_set;
  run.step = std::max(run.step, 0.25 * run.max_step);

  for (int iter = 0; iter < budget; ++iter) {
    const PathMax pm = path_argmax(path, f, opt.refine);
    const double c_upper = pm.value;
    rec.c_history.push_back(c_upper);
    rec.iterations = iter + 1;
    run.snapshots.push_back({c_upper, path.max_norm(), round_index, iter});

    if (path.max_norm() > run.r_max) {
      rec.escaped = run.escaped = true;
      break;
    }
    const std::size_t window = static_cast<std::size_t>(opt.stall_window);
    if (rec.c_history.size() > window) {
      const double before = rec.c_history[rec.c_history.size() - 1 - window];
      if (before - c_upper <= opt.stall_tolerance * std::max(1.0, std::abs(c_upper))) {
        rec.stalled = true;
        break;
      }
    }

    // The refined argmax sits on the ridge the path crosses; inserting it as
    // a vertex (the curve is unchanged) lets its hull straddle the ridge so
    // it can slide along it.
    PLPath working = path;
    std::size_t argmax_index = pm.t <= 0.0 ? pm.segment : (pm.t >= 1.0 ? pm.segment + 1 : 0);
    if (argmax_index == 0 || argmax_index + 1 >= working.size()) {
      if (pm.t > 0.0 && pm.t < 1.0) {
        argmax_index = pm.segment + 1;
        working.insert_vertex(argmax_index, pm.point, f);
      } else {
        argmax_index = snap_index(pm, working.size());
      }
    }
    const double spacing = working.mean_spacing();
    const double delta = std::max(opt.hull.radius, spacing / 8.0);
    const double r1 = 2.0 * delta;
    const double r2 = 6.0 * delta;
    const std::uint64_t iter_seed = mix_seed(opt.seed, (static_cast<std::uint64_t>(round_index) << 32) | iter);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < working.size(); ++i) {
      if (working.value(i) >= c_upper - epsilon || i == argmax_index) candidates.push_back(i);
    }
    std::vector<Vec> centers;
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t i : candidates) {
      const Vec& x = working.vertex(i);
      if ((x - problem.x_star()).norm() <= r2 || (x - problem.y_star()).norm() <= r2) continue;
      const GradientHull hull = sample_hull(f, x, delta, opt.hull.count, point_seed(iter_seed, x));
      double scale = 0.0;
      for (const auto& w : hull.generators()) scale = std::max(scale, w.norm());
      const double m = hull.min_norm_point().norm();
      if (m <= kNearCriticalRatio * std::max(1.0, scale)) {
        run.events.push_back({x, working.value(i), m, round_index, iter});
        continue;
      }
      centers.push_back(x);
      b = std::min(b, 0.5 * m);
    }
    if (centers.empty()) {
      rec.stalled = true;
      break;
    }
    high_set = centers;

    DescentParams dp;
    dp.hull = HullParams{delta, opt.hull.count, iter_seed};
    dp.cutoff_inner = r1;
    dp.cutoff_outer = r2;
    dp.substeps = opt.substeps;
    dp.constant_samples = opt.constant_samples;
    dp.calibration_probes = opt.calibration_probes;
    const DescentField field = DescentField::build(f, centers, b, problem.x_star(), problem.y_star(), dp);
    rec.last_h_max = field.h_max();
    rec.last_b = b;

    std::vector<std::size_t> moving;
    for (std::size_t i = 1; i + 1 < working.size(); ++i) {
      if (field.cutoff(working.vertex(i)) > 0.0) moving.push_back(i);
    }

    bool accepted = false;
    while (!accepted && run.step >= step_floor) {
      const double duration = run.step;
      std::vector<Vec> ends(moving.size());
      parallel_for(moving.size(), opt.workers, [&](std::size_t k) {
        const FlowStepReport r = field.flow(working.vertex(moving[k]), duration, iter_seed);
        ends[k] = run.radius_cap ? project_to_ball(r.end, *run.radius_cap) : r.end;
      });

      PLPath flowed = working;
      bool descent_ok = true;
      for (std::size_t k = 0; k < moving.size(); ++k) {
        const double before = working.value(moving[k]);
        flowed.move_vertex(moving[k], ends[k], f);
        if (flowed.value(moving[k]) - before > 1e-12 * std::max(1.0, std::abs(before))) descent_ok = false;
      }

      if (descent_ok) {
        PLPath respaced = flowed.respaced(f, opt.vertices);
        if (run.radius_cap) {
          for (std::size_t i = 1; i + 1 < respaced.size(); ++i) {
            if (respaced.vertex(i).norm() > *run.radius_cap) {
              respaced.move_vertex(i, project_to_ball(respaced.vertex(i), *run.radius_cap), f);
            }
          }
        }
        // Prefer the respaced path; keep the trimmed one when it is strictly
        // lower, since respacing can cut off an advancing tip.
        const double v_respaced = path_argmax(respaced, f, opt.refine).value;
        PLPath trimmed = flowed;
        std::vector<bool> mask = moving_mask(moving, flowed.size());
        while (trimmed.size() > n_vertices) {
          if (!remove_flattest(trimmed, mask, f)) break;
        }
        const double v_trimmed = trimmed.size() <= n_vertices + kMaxExtraVertices
                                     ? path_argmax(trimmed, f, opt.refine).value
                                     : std::numeric_limits<double>::infinity();
        if (v_trimmed < v_respaced && v_trimmed <= c_upper) {
          path = std::move(trimmed);
          accepted = true;
        } else if (v_respaced <= c_upper) {
          path = std::move(respaced);
          accepted = true;
        } else if (flowed.size() <= n_vertices + kMaxExtraVertices &&
                   path_argmax(flowed, f, opt.refine).value <= c_upper) {
          path = std::move(flowed);
          accepted = true;
        }
      }
      if (accepted) {
        ++rec.accepted;
        run.step = std::min(1.5 * run.step, run.max_step);
      } else {
        ++rec.rejected;
        run.step *= 0.5;
      }
    }
    if (!accepted) {
      run.step = step_floor * 4.0;
      rec.stalled = true;
      break;
    }
  }

  rec.argmax = path_argmax(path, f, opt.refine);
  rec.c_upper = rec.argmax.value;
  rec.radius_used = path.max_norm();
  rec.high_set = std::move(high_set);
  rec.path = path;
  run.snapshots.push_back({rec.c_upper, rec.radius_used, round_index, rec.iterations});
  run.path = std::move(path);
  run.c_best = std::min(run.c_best, rec.c_upper);
  run.rounds.push_back(std::move(rec));
}

void finalize_estimates(MinimaxRun& run) {
  if (run.snapshots.empty()) return;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : run.snapshots) best = std::min(best, s.value);
  run.c_best = best;
  for (auto& rec : run.rounds) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& s : run.snapshots) {
      if (s.value < best + rec.epsilon) r = std::min(r, s.radius);
    }
    rec.R_estimate = r;
    rec.R_finite = r <= run.r_max;
  }
}

MinimaxRun solve(const MountainPassProblem& problem, const MinimaxOptions& options) {
  MinimaxRun run = start_run(problem, options);
  for (double eps : run.epsilon_schedule) {
    minimax_round(run, eps, options.budget);
    if (run.escaped) break;
  }
  finalize_estimates(run);
  return run;
}

RadiusProfile capped_profile(const MountainPassProblem& problem, const std::vector<double>& r_grid, int budget,
                             const MinimaxOptions& options) {
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) throw Error("capped_profile: r_grid must be increasing");
  }
  RadiusProfile profile;
  profile.radii = r_grid;
  profile.values.assign(r_grid.size(), std::numeric_limits<double>::infinity());
  MinimaxOptions inner = options;
  inner.workers = 1;
  parallel_for(r_grid.size(), options.workers, [&](std::size_t k) {
    const double r = r_grid[k];
    MinimaxRun run = start_run(problem, inner);
    if (run.path->max_norm() > r) return;  // no feasible path through both endpoints
    run.radius_cap = r;
    for (double eps : {0.25, 0.05}) minimax_round(run, eps, budget);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : run.snapshots) best = std::min(best, s.value);
    profile.values[k] = best;
  });
  return profile;
}

std::optional<double> estimate_R(const RadiusProfile& profile, double epsilon, double c_ref) {
  for (std::size_t k = 0; k < profile.radii.size(); ++k) {
    if (profile.values[k] < c_ref + epsilon) return profile.radii[k];
  }
  return std::nullopt;
}

std::optional<double> estimate_R(const MountainPassProblem& problem, double epsilon, const std::vector<double>& r_grid,
                                 int budget, double c_ref, const MinimaxOptions& options) {
  for (double r : r_grid) {
    const RadiusProfile p = capped_profile(problem, {r}, budget, options);
    if (p.values[0] < c_ref + epsilon) return r;
  }
  return std::nullopt;
}

double level_set_distance(const ScalarField& field, const Vec& x, double level, double search_radius,
                          std::uint64_t seed, int directions) {
  const double inf = std::numeric_limits<double>::infinity();
  if (!(search_radius > 0.0)) return inf;
  const double g0 = field.evaluate(x) - level;
  if (g0 == 0.0) return 0.0;

  std::vector<Vec> dirs;
  const double n = x.norm();
  if (n > 0.0) {
    dirs.push_back(-x / n);
    dirs.push_back(x / n);
  }
  Rng rng(point_seed(seed, x));
  for (int k = 0; k < directions; ++k) dirs.push_back(sample_sphere(rng, static_cast<int>(x.size()), 1.0));

  constexpr int kMarch = 64;
  double best = inf;
  for (const auto& u : dirs) {
    double lo = 0.0;
    double limit = std::min(search_radius, best);
    for (int k = 1; k <= kMarch; ++k) {
      const double t = limit * k / kMarch;
      if ((field.evaluate(x + t * u) - level) * g0 <= 0.0) {
        double a = lo, c = t;
        for (int it = 0; it < 60 && c - a > 1e-15 * (1.0 + t); ++it) {
          const double mid = 0.5 * (a + c);
          if ((field.evaluate(x + mid * u) - level) * g0 <= 0.0) c = mid;
          else a = mid;
        }
        best = std::min(best, c);
        break;
      }
      lo = t;
    }
  }
  return best;
}

PLPath radial_retract(const PLPath& path, const ScalarField& field, double R, double epsilon, double c_ref,
                      double eps_prime, RetractReport* report, std::uint64_t seed) {
  if (eps_prime <= 0.0) eps_prime = epsilon / 10.0;
  const double level = c_ref + 0.5 * epsilon;
  const double floor = R - eps_prime;
  PLPath out = path;
  RetractReport local;
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    const Vec& beta = path.vertex(i);
    const double n = beta.norm();
    if (!(n > floor) || !(path.value(i) < level)) continue;
    const double d = level_set_distance(field, beta, level, n - floor, seed);
    const double g = std::isfinite(d) ? std::max(floor, n - d) : floor;
    out.move_vertex(i, Vec(beta * (g / n)), field);
    ++local.moved;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.vertex(i).norm() >= R && !(out.value(i) > c_ref)) ++local.failures;
  }
  if (report) *report = local;
  return out;
}

}  // namespace mpass
