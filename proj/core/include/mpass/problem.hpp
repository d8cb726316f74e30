#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "mpass/linalg.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {

/// Open ball {|x - center| < radius}.
struct BallBarrier {
  Vec center;
  double radius = 0.0;
};

/// Open half-space {<normal, x> < offset}. Needed for fields such as
/// x1 + x1^2 x2 whose sublevel components are all unbounded, so no ball
/// separates the endpoints.
struct HalfSpaceBarrier {
  Vec normal;
  double offset = 0.0;
};

using Barrier = std::variant<BallBarrier, HalfSpaceBarrier>;

/// Endpoints x*, y* separated by the boundary of a neighbourhood U of x*
/// on which f is strictly higher than at both endpoints.
class MountainPassProblem {
 public:
  /// Validates the geometry on 1000 * dim samples of the barrier boundary
  /// (half-space boundaries are sampled within `window` of the projection
  /// of x*; 0 selects 10 * max(1, |x*|, |y*|)). Throws GeometryError or
  /// DimensionMismatch.
  static MountainPassProblem create(ScalarField field, Vec x_star, Vec y_star, Barrier barrier,
                                    std::uint64_t seed = 0, double window = 0.0);

  const ScalarField& field() const { return field_; }
  const Vec& x_star() const { return x_star_; }
  const Vec& y_star() const { return y_star_; }
  const Barrier& barrier() const { return barrier_; }
  int dim() const { return field_.dim(); }

  /// Sampled inf of f over the barrier boundary.
  double barrier_min() const { return barrier_min_; }
  double endpoint_max() const;
  /// max(1, |x*|, |y*|).
  double scale() const;
  std::string barrier_description() const;

 private:
  MountainPassProblem(ScalarField field, Vec x_star, Vec y_star, Barrier barrier)
      : field_(std::move(field)), x_star_(std::move(x_star)), y_star_(std::move(y_star)), barrier_(std::move(barrier)) {}

  ScalarField field_;
  Vec x_star_;
  Vec y_star_;
  Barrier barrier_;
  double barrier_min_ = 0.0;
};

/// Standard instances: double_well and nonsmooth_well between (-1, 0) and
/// (1, 0) with a ball of radius 0.5 around x*; broughton between (-1, -1)
/// and (1, -1.5) separated by {x1 < 0}.
MountainPassProblem default_problem(std::string_view corpus_name, std::uint64_t seed = 0);

}  // namespace mpass
