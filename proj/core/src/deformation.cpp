#include "mpass/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpass/errors.hpp"

namespace mpass {

double smoothstep_cutoff(double distance, double inner, double outer) {
  if (distance <= inner) return 1.0;
  if (distance >= outer) return 0.0;
  const double u = (distance - inner) / (outer - inner);
  return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

DescentField::DescentField(ScalarField field, std::vector<Vec> centers, double b, const DescentParams& params)
    : field_(std::move(field)), centers_(std::move(centers)), b_(b), params_(params) {
  r1_ = params.cutoff_inner > 0.0 ? params.cutoff_inner : 2.0 * params.hull.radius;
  r2_ = params.cutoff_outer > 0.0 ? params.cutoff_outer : 3.0 * r1_;
  if (!(r1_ < r2_)) throw Error("DescentField: cutoff radii must satisfy r1 < r2");
  if (params_.substeps < 1) throw Error("DescentField: substeps must be positive");
}

DescentField DescentField::build(const ScalarField& field, std::vector<Vec> high_set, double b, const Vec& x_star,
                                 const Vec& y_star, const DescentParams& params) {
  if (!(b > 0.0)) throw Error("build_descent_field: b must be positive");
  DescentField df(field, std::move(high_set), b, params);
  for (const auto& c : df.centers_) {
    if (c.size() != field.dim()) throw DimensionMismatch("build_descent_field: high-set point has wrong length");
    if ((c - x_star).norm() <= df.r2_ || (c - y_star).norm() <= df.r2_) {
      throw GeometryError("build_descent_field: a high-set point lies within the cutoff radius of an endpoint");
    }
  }
  df.estimate_constants();
  return df;
}

void DescentField::estimate_constants() {
  const double ramp_lipschitz = 3.0 / (2.0 * (r2_ - r1_));
  if (centers_.empty()) {
    K_ = 0.0;
    K_prime_ = 0.0;
    h0_ = params_.h0 > 0.0 ? params_.h0 : 0.1;
    h_max_ = h0_;
    return;
  }

  Rng rng(mix_seed(params_.hull.seed, 0x4b4b4bULL));
  std::uniform_int_distribution<std::size_t> pick(0, centers_.size() - 1);
  const int samples = std::max(params_.constant_samples, 1);

  double grad_bound = 0.0;
  double direction_lipschitz = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vec p = sample_ball(rng, centers_[pick(rng)], r2_);
    const Vec q = sample_ball(rng, p, 0.5 * r1_);
    HullParams hp = params_.hull;
    hp.seed = point_seed(params_.hull.seed, p);
    const GradientHull hull_p = sample_hull(field_, p, hp);
    for (const auto& w : hull_p.generators()) grad_bound = std::max(grad_bound, w.norm());

    hp.seed = point_seed(params_.hull.seed, q);
    const GradientHull hull_q = sample_hull(field_, q, hp);
    const auto vp = pseudo_gradient(hull_p, b_);
    const auto vq = pseudo_gradient(hull_q, b_);
    const double dist = (p - q).norm();
    if (vp && vq && dist > 0.0) direction_lipschitz = std::max(direction_lipschitz, (*vp - *vq).norm() / dist);
  }
  K_prime_ = 1.5 * grad_bound;
  K_ = ramp_lipschitz + 1.5 * direction_lipschitz;

  if (params_.h0 > 0.0) {
    h0_ = params_.h0;
  } else {
    h0_ = calibrate_h0(field_, centers_, 0.25 * b_, params_.hull, params_.calibration_probes).h0;
  }
  const double denom = 2.0 * K_ * K_prime_;
  h_max_ = denom > 0.0 ? std::min(b_ / denom, h0_) : h0_;
}

double DescentField::distance_to_high_set(const Vec& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers_) best = std::min(best, (x - c).norm());
  return best;
}

double DescentField::cutoff(const Vec& x) const {
  if (centers_.empty()) return 0.0;
  return smoothstep_cutoff(distance_to_high_set(x), r1_, r2_);
}

FieldSample DescentField::field_at(const Vec& x, std::uint64_t seed) const {
  FieldSample out;
  const double phi = cutoff(x);
  if (phi <= 0.0) {
    out.value = Vec::Zero(x.size());
    return out;
  }
  HullParams hp = params_.hull;
  hp.seed = point_seed(seed, x);
  const GradientHull hull = sample_hull(field_, x, hp);
  if (auto v = pseudo_gradient(hull, b_)) {
    out.value = phi * *v;
  } else {
    out.value = Vec::Zero(x.size());
    out.near_critical = true;
    out.residual = hull.min_norm_point().norm();
  }
  return out;
}

FlowStepReport DescentField::flow(const Vec& x0, double duration, std::uint64_t seed, bool keep_trace) const {
  if (!(duration > 0.0)) throw Error("flow: duration must be positive");
  FlowStepReport report;
  report.start = x0;
  report.h = duration;
  report.in_core = !centers_.empty() && distance_to_high_set(x0) <= r1_;
  if (keep_trace) report.trace.push_back(x0);

  Vec x = x0;
  const double dt = duration / params_.substeps;
  for (int step = 0; step < params_.substeps; ++step) {
    const FieldSample s = field_at(x, seed);
    if (s.near_critical) ++report.near_critical_events;
    x -= dt * s.value;
    if (keep_trace) report.trace.push_back(x);
  }
  report.end = x;
  report.f_drop = field_.evaluate(x0) - field_.evaluate(x);
  return report;
}

}  // namespace mpass
