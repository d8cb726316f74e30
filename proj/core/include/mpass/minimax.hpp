#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpass/clarke.hpp"
#include "mpass/linalg.hpp"
#include "mpass/path.hpp"
#include "mpass/problem.hpp"

namespace mpass {

struct MinimaxOptions {
  int vertices = 65;
  int refine = 32;
  HullParams hull;          // radius used for classification hulls
  double eps0 = 0.5;
  int rounds = 8;           // schedule eps_j = eps0 * 2^-j
  int budget = 500;         // iterations per round
  double r_max = 0.0;       // 0: 1000 * max(1, |x*|, |y*|)
  double stall_tolerance = 1e-6;
  int stall_window = 10;
  int substeps = 32;
  int constant_samples = 64;
  int calibration_probes = 100;
  int workers = 1;
  std::uint64_t seed = 0;
};

std::vector<double> epsilon_schedule(double eps0, int rounds);

struct NearCriticalEvent {
  Vec point;
  double value = 0.0;
  double residual = 0.0;  // |min-norm point| of the hull there
  int round = 0;
  int iteration = 0;
};

/// One path observed during a run, reduced to what R(eps) needs.
struct PathSnapshot {
  double value = 0.0;
  double radius = 0.0;
  int round = 0;
  int iteration = 0;
};

struct RoundRecord {
  double epsilon = 0.0;
  std::optional<PLPath> path;   // path at the end of the round
  double c_upper = 0.0;         // path_value of that path
  double radius_used = 0.0;     // its max vertex norm
  double R_estimate = 0.0;      // filled by finalize_estimates
  bool R_finite = true;
  int iterations = 0;
  int accepted = 0;
  int rejected = 0;
  bool stalled = false;
  bool escaped = false;
  double last_h_max = 0.0;      // certified step of the last descent field
  double last_b = 0.0;
  std::vector<double> c_history;  // c_upper per iteration, non-increasing
  PathMax argmax;                 // refined argmax of the final path
  std::vector<Vec> high_set;      // final high vertices
};

struct MinimaxRun {
  std::optional<MountainPassProblem> problem;
  MinimaxOptions options;
  std::vector<double> epsilon_schedule;
  std::vector<RoundRecord> rounds;
  std::vector<PathSnapshot> snapshots;
  std::vector<NearCriticalEvent> events;
  std::optional<PLPath> path;   // current path
  double c_best = 0.0;
  double r_max = 0.0;
  double step = 0.0;            // adaptive flow duration carried across rounds
  double max_step = 0.0;
  std::optional<double> radius_cap;
  bool escaped = false;
};

/// Fresh run seeded with the straight segment from x* to y*.
MinimaxRun start_run(const MountainPassProblem& problem, const MinimaxOptions& options = {});

/// One eps round: repeatedly flows the high vertices of the path down the
/// cut-off pseudo-gradient field, accepting only deformations that do not
/// raise the path value, until the budget is spent or the value stalls.
void minimax_round(MinimaxRun& run, double epsilon, int budget);

/// Recomputes c_best and R_estimate for every completed round.
void finalize_estimates(MinimaxRun& run);

/// Runs the full eps schedule.
MinimaxRun solve(const MountainPassProblem& problem, const MinimaxOptions& options = {});

/// Best path value reachable inside the closed r-ball, per radius.
struct RadiusProfile {
  std::vector<double> radii;
  std::vector<double> values;
};

/// Radius-capped runs, one per radius of the grid.
RadiusProfile capped_profile(const MountainPassProblem& problem, const std::vector<double>& r_grid, int budget,
                             const MinimaxOptions& options = {});

/// Smallest r of the profile whose capped value is below c_ref + eps;
/// std::nullopt stands for "infinite at budget".
std::optional<double> estimate_R(const RadiusProfile& profile, double epsilon, double c_ref);
std::optional<double> estimate_R(const MountainPassProblem& problem, double epsilon, const std::vector<double>& r_grid,
                                 int budget, double c_ref, const MinimaxOptions& options = {});

struct RetractReport {
  int moved = 0;
  int failures = 0;  // vertices with norm >= R and f <= c_ref after retraction
};

/// Pulls vertices with |beta| > R - eps' and f(beta) < c_ref + eps/2 radially
/// inward to max(R - eps', |beta| - dist(beta, {f = c_ref + eps/2})).
/// eps' <= 0 selects eps / 10.
PLPath radial_retract(const PLPath& path, const ScalarField& field, double R, double epsilon, double c_ref,
                      double eps_prime = 0.0, RetractReport* report = nullptr, std::uint64_t seed = 0);

/// Estimated distance from x to the level set {f = level}, searched along
/// the two radial directions and random directions up to `search_radius`.
/// Returns +inf when no crossing is found.
double level_set_distance(const ScalarField& field, const Vec& x, double level, double search_radius,
                          std::uint64_t seed = 0, int directions = 64);

}  // namespace mpass
