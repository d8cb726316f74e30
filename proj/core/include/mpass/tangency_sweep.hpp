#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mpass/linalg.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

struct SweepPoint {
  double theta = 0.0;  // angle on the circle; NaN for sphere sweeps
  Vec x;
  double value = 0.0;
  double residual = 0.0;
};

/// Arc [theta_lo, theta_hi] on which x1 df/dx2 - x2 df/dx1 vanishes identically.
struct Plateau {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

struct CircleSweep {
  std::vector<SweepPoint> points;
  std::vector<Plateau> plateaus;
  int rejected = 0;  // roots whose residual stayed above the bound
};

struct SphereSweep {
  std::vector<SweepPoint> points;
  bool plateau = false;
  int starts = 0;
};

inline constexpr double kCircleTolerance = 1e-8;
inline constexpr double kSphereTolerance = 1e-4;
inline constexpr double kClusterTolerance = 0.05;
inline constexpr double kDivergenceThreshold = 1e6;

/// Tangency residual used by the sweeps: relative orthogonal component of
/// grad f(x), or |g| / (R * scale) where the gradient itself is below
/// 1e-8 * scale (near-critical points count as tangent).
double sweep_residual(const ScalarField& field, const Vec& x, double gradient_scale);

/// Roots of g(theta) = x1 df/dx2 - x2 df/dx1 on the circle of radius R,
/// isolated by sign changes on `resolution` equally spaced angles and
/// refined by bisection.
CircleSweep sweep_circle(const ScalarField& field, double R, int resolution);

/// Multistart Levenberg-Marquardt on the tangency residual over the sphere of
/// radius R (dim >= 3); minimizers deduplicated at angular distance 1e-3.
SphereSweep sweep_sphere(const ScalarField& field, double R, int starts, std::uint64_t seed);

struct LimitCluster {
  double value = 0.0;
  int branch_count = 0;
  double rate = 0.0;  // mean ratio of successive f differences across doublings
};

struct Branch {
  std::vector<int> point_index;  // index into the per-radius point list
  std::vector<double> values;
  bool complete = false;
  bool ambiguous = false;
  bool divergent = false;
  double limit = 0.0;
  double rate = 0.0;
};

struct SweepTrace {
  std::vector<double> radii;
  std::vector<std::vector<SweepPoint>> points;  // per radius
  std::vector<std::vector<Plateau>> plateaus;   // per radius (2-D only)
  std::vector<bool> sphere_plateau;             // per radius (n >= 3 only)
  std::vector<Branch> branches;
  std::vector<LimitCluster> clusters;
  std::map<std::string, double> diagnostics;
};

struct SweepOptions {
  std::vector<double> radii{10.0, 20.0, 40.0, 80.0, 160.0};
  int resolution = 720;
  int starts = 0;  // 0: 50 * dim
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Sweeps every radius and clusters the limiting values.
SweepTrace sweep(const ScalarField& field, const SweepOptions& options = {});

/// Tracks branches across radii by nearest direction, drops divergent
/// branches, extrapolates the rest in 1/R and clusters the limits.
std::vector<LimitCluster> cluster_limits(SweepTrace& trace, double tol_cluster = kClusterTolerance);

}  // namespace mpass
