#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/expression.hpp"
#include "mpass/tangency_sweep.hpp"

namespace mpass {
namespace {

constexpr double kPi = std::numbers::pi;

double g_on_circle(const ScalarField& f, double R, double theta) {
  const Vec x = make_vec({R * std::cos(theta), R * std::sin(theta)});
  const Vec grad = f.gradient(x);
  return x[0] * grad[1] - x[1] * grad[0];
}

SweepTrace trace_for(const ScalarField& f, std::vector<double> radii, int resolution = 720) {
  SweepOptions o;
  o.radii = std::move(radii);
  o.resolution = resolution;
  return sweep(f, o);
}

TEST(SweepCircle, CrossSquareAxesAndDiagonals) {
  const double R = 10.0;
  const CircleSweep s = sweep_circle(corpus_field("cross_square"), R, 720);
  ASSERT_EQ(s.points.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_NEAR(s.points[k].theta, k * kPi / 4, 1e-12);
    const double expected = k % 2 == 0 ? 0.0 : std::pow(R, 4) / 4;
    EXPECT_NEAR(s.points[k].value, expected, 1e-9 * (1.0 + expected));
  }
  EXPECT_TRUE(s.plateaus.empty());
}

TEST(SweepCircle, LinearHasTwoRoots) {
  const CircleSweep s = sweep_circle(corpus_field("linear"), 7.0, 720);
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_NEAR(s.points[0].theta, 0.0, 1e-12);
  EXPECT_NEAR(s.points[1].theta, kPi, 1e-12);
  EXPECT_NEAR(s.points[0].value, 7.0, 1e-12);
  EXPECT_NEAR(s.points[1].value, -7.0, 1e-12);
}

TEST(SweepCircle, BroughtonAgainstDenseSignChanges) {
  const ScalarField f = corpus_field("broughton");
  const double R = 10.0;
  const int dense = 1000000;
  std::vector<double> crossings;
  double prev = g_on_circle(f, R, 0.0);
  for (int i = 1; i <= dense; ++i) {
    const double theta = 2 * kPi * i / dense;
    const double g = g_on_circle(f, R, theta);
    if ((prev < 0.0) != (g < 0.0)) crossings.push_back(theta);
    prev = g;
  }
  const CircleSweep s = sweep_circle(f, R, 720);
  ASSERT_EQ(s.points.size(), crossings.size());
  for (const auto& p : s.points) {
    double nearest = 10.0;
    for (double c : crossings) nearest = std::min(nearest, std::abs(std::remainder(p.theta - c, 2 * kPi)));
    EXPECT_LE(nearest, 2 * kPi / dense + 1e-12);
    EXPECT_LE(p.residual, kCircleTolerance);
  }
}

TEST(SweepCircle, DoublingResolutionKeepsRoots) {
  for (const char* name : {"cross_square", "broughton", "linear", "double_well"}) {
    const ScalarField f = corpus_field(name);
    for (double R : {10.0, 40.0}) {
      EXPECT_LE(sweep_circle(f, R, 720).points.size(), sweep_circle(f, R, 1440).points.size()) << name;
    }
  }
}

TEST(SweepCircle, RadialFieldIsOnePlateau) {
  const ScalarField f = ScalarField::from_expression(Expression::parse("x1^2 + x2^2", 2));
  const CircleSweep s = sweep_circle(f, 5.0, 360);
  ASSERT_EQ(s.plateaus.size(), 1u);
  EXPECT_NEAR(s.plateaus[0].theta_hi - s.plateaus[0].theta_lo, 2 * kPi, 2 * kPi / 360 + 1e-12);
}

TEST(SweepSphere, LiftedCrossSquareKeepsPlanarBranches) {
  const SphereSweep s = sweep_sphere(corpus_field("cross_square", 3), 10.0, 150, 1);
  int axis_points = 0;
  for (const auto& p : s.points) {
    EXPECT_LE(p.residual, kSphereTolerance);
    if (std::abs(p.x[2]) < 1e-3 && std::min(std::abs(p.x[0]), std::abs(p.x[1])) < 1e-3) ++axis_points;
  }
  EXPECT_EQ(axis_points, 4);
}

TEST(SweepSphere, RadialFieldIsPlateau) {
  const ScalarField f = ScalarField::from_expression(Expression::parse("x1^2 + x2^2 + x3^2", 3));
  EXPECT_TRUE(sweep_sphere(f, 3.0, 60, 2).plateau);
}

TEST(SweepSphere, LinearHasTwoPoles) {
  const ScalarField f = ScalarField::from_expression(Expression::parse("x1", 3));
  const SphereSweep s = sweep_sphere(f, 10.0, 150, 3);
  ASSERT_EQ(s.points.size(), 2u);
  for (const auto& p : s.points) {
    EXPECT_NEAR(std::abs(p.x[0]), 10.0, 1e-6);
    EXPECT_NEAR(std::hypot(p.x[1], p.x[2]), 0.0, 1e-3);
  }
  EXPECT_THROW(sweep_sphere(corpus_field("linear"), 10.0, 10, 0), Error);
}

TEST(ClusterLimits, CrossSquareAxes) {
  const SweepTrace t = trace_for(corpus_field("cross_square"), {10, 20, 40, 80});
  ASSERT_EQ(t.clusters.size(), 1u);
  EXPECT_LE(std::abs(t.clusters[0].value), 1e-6);
  EXPECT_EQ(t.clusters[0].branch_count, 4);
}

TEST(ClusterLimits, LinearDiverges) {
  EXPECT_TRUE(trace_for(corpus_field("linear"), {10, 20, 40, 80}).clusters.empty());
}

TEST(ClusterLimits, BroughtonTendsToZero) {
  const SweepTrace t = trace_for(corpus_field("broughton"), {10, 20, 40, 80, 160});
  ASSERT_EQ(t.clusters.size(), 1u);
  EXPECT_NEAR(t.clusters[0].value, 0.0, 0.05);
}

TEST(ClusterLimits, StableAcrossRadiusWindows) {
  for (const char* name : {"cross_square", "broughton", "linear"}) {
    const ScalarField f = corpus_field(name);
    const SweepTrace lo = trace_for(f, {10, 20, 40, 80});
    const SweepTrace hi = trace_for(f, {20, 40, 80, 160});
    ASSERT_EQ(lo.clusters.size(), hi.clusters.size()) << name;
    for (std::size_t k = 0; k < lo.clusters.size(); ++k) {
      EXPECT_NEAR(lo.clusters[k].value, hi.clusters[k].value, kClusterTolerance) << name;
    }
  }
}

TEST(ClusterLimits, NeedsFourRadii) {
  SweepTrace t = trace_for(corpus_field("linear"), {10, 20, 40});
  EXPECT_THROW(cluster_limits(t), Error);
}

TEST(ClusterLimits, WorkerCountDoesNotMatter) {
  SweepOptions o;
  o.workers = 1;
  const SweepTrace a = sweep(corpus_field("broughton"), o);
  o.workers = 4;
  const SweepTrace b = sweep(corpus_field("broughton"), o);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t r = 0; r < a.points.size(); ++r) {
    ASSERT_EQ(a.points[r].size(), b.points[r].size());
    for (std::size_t k = 0; k < a.points[r].size(); ++k) EXPECT_EQ(a.points[r][k].x, b.points[r][k].x);
  }
}

}  // namespace
}  // namespace mpass
