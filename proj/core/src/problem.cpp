#include "mpass/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"

namespace mpass {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double sampled_min_on_sphere(const ScalarField& field, const BallBarrier& ball, int samples, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0xba11ULL));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vec x = ball.center + sample_sphere(rng, field.dim(), ball.radius);
    best = std::min(best, field.evaluate(x));
  }
  return best;
}

double sampled_min_on_plane(const ScalarField& field, const HalfSpaceBarrier& plane, const Vec& anchor, double window,
                            int samples, std::uint64_t seed) {
  const double nn = plane.normal.squaredNorm();
  const Vec unit = plane.normal / std::sqrt(nn);
  // Orthogonal projection of the anchor onto the plane.
  const Vec base = anchor - ((plane.normal.dot(anchor) - plane.offset) / nn) * plane.normal;
  Rng rng(mix_seed(seed, 0x91a4eULL));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vec d = sample_ball(rng, Vec::Zero(field.dim()), window);
    d -= unit.dot(d) * unit;
    best = std::min(best, field.evaluate(base + d));
  }
  return best;
}

}  // namespace

MountainPassProblem MountainPassProblem::create(ScalarField field, Vec x_star, Vec y_star, Barrier barrier,
                                                std::uint64_t seed, double window) {
  const int n = field.dim();
  if (x_star.size() != n || y_star.size() != n) {
    throw DimensionMismatch("problem: endpoints must have length " + std::to_string(n));
  }
  MountainPassProblem p(std::move(field), std::move(x_star), std::move(y_star), std::move(barrier));
  const int samples = 1000 * n;

  if (const auto* ball = std::get_if<BallBarrier>(&p.barrier_)) {
    if (ball->center.size() != n) throw DimensionMismatch("problem: barrier center has wrong length");
    if (!(ball->radius > 0.0)) throw GeometryError("problem: barrier radius must be positive");
    if (!((p.x_star_ - ball->center).norm() < ball->radius)) {
      throw GeometryError("problem: x* must lie inside the barrier ball");
    }
    if (!((p.y_star_ - ball->center).norm() > ball->radius)) {
      throw GeometryError("problem: y* must lie outside the closed barrier ball");
    }
    p.barrier_min_ = sampled_min_on_sphere(p.field_, *ball, samples, seed);
  } else {
    const auto& plane = std::get<HalfSpaceBarrier>(p.barrier_);
    if (plane.normal.size() != n) throw DimensionMismatch("problem: barrier normal has wrong length");
    if (!(plane.normal.norm() > 0.0)) throw GeometryError("problem: barrier normal must be nonzero");
    if (!(plane.normal.dot(p.x_star_) < plane.offset)) {
      throw GeometryError("problem: x* must lie inside the barrier half-space");
    }
    if (!(plane.normal.dot(p.y_star_) > plane.offset)) {
      throw GeometryError("problem: y* must lie outside the closed barrier half-space");
    }
    const double w = window > 0.0 ? window : 10.0 * p.scale();
    p.barrier_min_ = sampled_min_on_plane(p.field_, plane, p.x_star_, w, samples, seed);
  }

  const double top = p.endpoint_max();
  if (!(top < p.barrier_min_)) {
    throw GeometryError("mountain-pass geometry violated: need f(x*), f(y*) < inf_{x in dU} f(x), got max(f(x*), f(y*)) = " +
                        format_number(top) + " and sampled inf over dU = " + format_number(p.barrier_min_));
  }
  return p;
}

double MountainPassProblem::endpoint_max() const {
  return std::max(field_.evaluate(x_star_), field_.evaluate(y_star_));
}

double MountainPassProblem::scale() const { return std::max({1.0, x_star_.norm(), y_star_.norm()}); }

std::string MountainPassProblem::barrier_description() const {
  std::ostringstream os;
  os.precision(17);
  auto vec = [&](const Vec& v) {
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  if (const auto* ball = std::get_if<BallBarrier>(&barrier_)) {
    os << "ball center=";
    vec(ball->center);
    os << " radius=" << ball->radius;
  } else {
    const auto& plane = std::get<HalfSpaceBarrier>(barrier_);
    os << "half-space normal=";
    vec(plane.normal);
    os << " offset=" << plane.offset;
  }
  return os.str();
}

MountainPassProblem default_problem(std::string_view name, std::uint64_t seed) {
  if (name == "double_well" || name == "nonsmooth_well") {
    return MountainPassProblem::create(corpus_field(name), make_vec({-1.0, 0.0}), make_vec({1.0, 0.0}),
                                       BallBarrier{make_vec({-1.0, 0.0}), 0.5}, seed);
  }
  if (name == "broughton") {
    return MountainPassProblem::create(corpus_field(name), make_vec({-1.0, -1.0}), make_vec({1.0, -1.5}),
                                       HalfSpaceBarrier{make_vec({1.0, 0.0}), 0.0}, seed);
  }
  throw Error("no default mountain-pass problem for '" + std::string(name) + "'");
}

}  // namespace mpass
