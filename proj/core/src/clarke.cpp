#include "mpass/clarke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpass/errors.hpp"
#include "mpass/min_norm.hpp"

namespace mpass {

int default_hull_count(int dim) { return std::max(2 * dim, 16); }

GradientHull::GradientHull(Vec center, std::vector<Vec> generators, double radius)
    : center_(std::move(center)), generators_(std::move(generators)), radius_(radius) {
  if (generators_.empty()) throw Error("GradientHull: generator list must be non-empty");
  if (!(radius_ > 0.0)) throw Error("GradientHull: radius must be positive");
}

const Vec& GradientHull::min_norm_point() const {
  if (!min_norm_cache_) min_norm_cache_ = mpass::min_norm_point(generators_).point;
  return *min_norm_cache_;
}

double GradientHull::directional_upper(const Vec& v) const {
  if (v.size() != center_.size()) throw DimensionMismatch("directional_upper: direction has wrong length");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& w : generators_) best = std::max(best, w.dot(v));
  return best;
}

double GradientHull::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) d = std::max(d, (generators_[i] - generators_[j]).norm());
  }
  return d;
}

GradientHull sample_hull(const ScalarField& field, const Vec& x, double radius, int count, std::uint64_t seed) {
  if (!(radius > 0.0)) throw Error("sample_hull: radius must be positive");
  if (count < 0) throw Error("sample_hull: count must be non-negative");
  if (x.size() != field.dim()) throw DimensionMismatch("sample_hull: point has wrong length");
  if (count == 0) count = default_hull_count(field.dim());
  Rng rng(seed);
  std::vector<Vec> generators;
  generators.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec p = sample_ball(rng, x, radius);
    for (int attempt = 0; attempt < 32 && field.is_nonsmooth_at(p); ++attempt) p = sample_ball(rng, x, radius);
    if (field.is_nonsmooth_at(p)) continue;
    generators.push_back(field.gradient(p));
  }
  if (generators.empty()) throw NonsmoothPoint("sample_hull: every sample landed on the nonsmooth locus");
  return GradientHull(x, std::move(generators), radius);
}

GradientHull sample_hull(const ScalarField& field, const Vec& x, const HullParams& params) {
  const int count = params.count > 0 ? params.count : default_hull_count(field.dim());
  return sample_hull(field, x, params.radius, count, params.seed);
}

double directional_upper(const GradientHull& hull, const Vec& v) { return hull.directional_upper(v); }

std::optional<Vec> pseudo_gradient(const GradientHull& hull, double b) {
  if (!(b > 0.0)) throw Error("pseudo_gradient: b must be positive");
  const Vec& m = hull.min_norm_point();
  const double norm = m.norm();
  if (!(norm >= 2.0 * b)) return std::nullopt;
  Vec v = m * (kPseudoGradientScale / norm);
  // The min-norm certificate gives <w, v> >= (3/4)|m| >= 3b/2 up to solver
  // tolerance; verify the strict inequalities before handing v out.
  if (!(v.norm() < 1.0)) return std::nullopt;
  for (const auto& w : hull.generators()) {
    if (!(w.dot(v) > b)) return std::nullopt;
  }
  return v;
}

double critical_residual(const ScalarField& field, const Vec& x, double radius, int count, std::uint64_t seed) {
  return sample_hull(field, x, radius, count, seed).min_norm_point().norm();
}

DirectionCalibration calibrate_h0(const ScalarField& field, const std::vector<Vec>& centers, double epsilon,
                                  const HullParams& hull, int probes, int max_halvings) {
  if (centers.empty()) throw Error("calibrate_h0: empty compact set");
  std::vector<GradientHull> hulls;
  hulls.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    HullParams p = hull;
    p.seed = point_seed(hull.seed, centers[i]);
    hulls.push_back(sample_hull(field, centers[i], p));
  }

  DirectionCalibration out;
  out.probes = probes;
  double h0 = 0.1;
  for (int halving = 0; halving <= max_halvings; ++halving) {
    Rng rng(mix_seed(hull.seed, static_cast<std::uint64_t>(halving) + 0x6830ULL));
    std::uniform_real_distribution<double> unit;
    std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
    int violations = 0;
    for (int k = 0; k < probes; ++k) {
      const Vec y = sample_ball(rng, centers[pick(rng)], h0);
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < centers.size(); ++i) {
        const double d = (y - centers[i]).norm();
        if (d < best) {
          best = d;
          nearest = i;
        }
      }
      const double h = h0 * std::max(unit(rng), 1e-3);
      const Vec v = sample_ball(rng, Vec::Zero(field.dim()), 1.0);
      const double quotient = (field.evaluate(y + h * v) - field.evaluate(y)) / h;
      if (!(quotient < hulls[nearest].directional_upper(v) + epsilon)) ++violations;
    }
    out.h0 = h0;
    out.halvings = halving;
    out.violations_at_h0 = violations;
    if (violations == 0) break;
    h0 *= 0.5;
  }
  return out;
}

}  // namespace mpass
