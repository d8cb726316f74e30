#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpass/linalg.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

/// Default hull size: max(2 * dim, 16).
int default_hull_count(int dim);

/// Finite generator set approximating the Clarke subdifferential at `center`:
/// gradients sampled at points within `radius` of it.
class GradientHull {
 public:
  GradientHull(Vec center, std::vector<Vec> generators, double radius);

  const Vec& center() const { return center_; }
  const std::vector<Vec>& generators() const { return generators_; }
  double radius() const { return radius_; }
  int dim() const { return static_cast<int>(center_.size()); }

  /// Minimum-norm element of co(generators); computed once and cached.
  const Vec& min_norm_point() const;

  /// max_w <w, v>: the sampled generalized directional derivative f°(x; v).
  double directional_upper(const Vec& v) const;

  /// Largest pairwise distance between generators.
  double diameter() const;

 private:
  Vec center_;
  std::vector<Vec> generators_;
  double radius_;
  mutable std::optional<Vec> min_norm_cache_;
};

struct HullParams {
  double radius = 1e-3;
  int count = 0;  // 0: default_hull_count(dim)
  std::uint64_t seed = 0;
};

/// Gradients at `count` points (0: default_hull_count) drawn uniformly from the ball B_radius(x),
/// resampled when a draw lands on the nonsmooth locus. Deterministic in seed.
GradientHull sample_hull(const ScalarField& field, const Vec& x, double radius, int count, std::uint64_t seed);
GradientHull sample_hull(const ScalarField& field, const Vec& x, const HullParams& params);

double directional_upper(const GradientHull& hull, const Vec& v);

/// Scale of the returned pseudo-gradient relative to the unit vector m/|m|.
inline constexpr double kPseudoGradientScale = 0.75;

/// v = (3/4) m / |m| when |m| >= 2b, with the direct check |v| < 1 and
/// <w, v> > b for every generator; std::nullopt means "near-critical".
std::optional<Vec> pseudo_gradient(const GradientHull& hull, double b);

/// |min_norm_point(sample_hull(field, x, ...))|.
double critical_residual(const ScalarField& field, const Vec& x, double radius, int count, std::uint64_t seed);

struct DirectionCalibration {
  double h0 = 0.0;
  int halvings = 0;
  int violations_at_h0 = 0;  // > 0 only if the halving budget ran out
  int probes = 0;
};

/// Largest h0 = 0.1 / 2^k such that, for random y with dist(y, D) <= h0,
/// h in (0, h0] and |v| <= 1,
///   (f(y + h v) - f(y)) / h < f°(x; v) + epsilon,   x = nearest point of D,
/// holds on every probe, with f° taken from sampled hulls at D.
DirectionCalibration calibrate_h0(const ScalarField& field, const std::vector<Vec>& centers, double epsilon,
                                  const HullParams& hull, int probes = 100, int max_halvings = 30);

}  // namespace mpass
