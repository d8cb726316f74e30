#include <gtest/gtest.h>

#include <cmath>

#include "mpass/clarke.hpp"
#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/expression.hpp"
#include "mpass/min_norm.hpp"

namespace mpass {
namespace {

GradientHull hull_of(std::vector<Vec> gens) {
  const int n = static_cast<int>(gens.front().size());
  return GradientHull(Vec::Zero(n), std::move(gens), 1.0);
}

// Minimum norm over the segment [a, b] by dense sampling.
double brute_segment_min(const Vec& a, const Vec& b, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    best = std::min(best, (t * a + (1.0 - t) * b).norm());
  }
  return best;
}

TEST(MinNorm, Singleton) {
  EXPECT_TRUE(hull_of({make_vec({2.0, 0.0})}).min_norm_point().isApprox(make_vec({2.0, 0.0})));
}

TEST(MinNorm, OriginInHull) {
  EXPECT_LE(hull_of({make_vec({1.0, 0.0}), make_vec({-1.0, 0.0})}).min_norm_point().norm(), 1e-12);
}

TEST(MinNorm, SegmentAgainstDenseSampling) {
  const Vec a = make_vec({1.0, 1.0}), b = make_vec({1.0, -1.0});
  const Vec m = hull_of({a, b}).min_norm_point();
  EXPECT_NEAR(m.norm(), brute_segment_min(a, b, 1000000), 1e-9);
  EXPECT_TRUE(m.isApprox(make_vec({1.0, 0.0}), 1e-10));
}

TEST(MinNorm, OptimalityInequalityOnRandomHulls) {
  Rng rng(3);
  std::uniform_int_distribution<int> dim(2, 8), count(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = dim(rng);
    std::vector<Vec> gens;
    const Vec shift = sample_sphere(rng, n, 1.0);
    for (int k = count(rng); k > 0; --k) gens.push_back(sample_ball(rng, shift, 1.5));
    double scale = 0.0;
    for (const auto& w : gens) scale = std::max(scale, w.squaredNorm());
    const MinNormResult r = min_norm_point(gens);
    ASSERT_TRUE(r.converged);
    double weight_sum = 0.0;
    Vec combo = Vec::Zero(n);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      EXPECT_GE(r.weights[i], 0.0);
      weight_sum += r.weights[i];
      combo += r.weights[i] * gens[i];
    }
    EXPECT_NEAR(weight_sum, 1.0, 1e-12);
    EXPECT_LE((combo - r.point).norm(), 1e-10 * (1.0 + std::sqrt(scale)));
    for (const auto& w : gens) EXPECT_GE(w.dot(r.point), r.point.squaredNorm() - 1e-9 * scale);
  }
}

TEST(SampleHull, SmoothPointDegenerates) {
  const GradientHull h = sample_hull(corpus_field("double_well"), make_vec({1.0, 1.0}), 1e-6, 16, 1);
  for (const auto& w : h.generators()) EXPECT_LE((w - make_vec({0.0, 2.0})).norm(), 1e-4);
  EXPECT_NEAR(h.directional_upper(make_vec({0.0, 1.0})), 2.0, 1e-3);
}

TEST(SampleHull, KinkProducesBothBranches) {
  const GradientHull h = sample_hull(corpus_field("nonsmooth_well"), make_vec({1.0, 0.0}), 1e-3, 32, 2);
  int near_minus = 0, near_plus = 0;
  for (const auto& w : h.generators()) {
    if ((w - make_vec({-2.0, 0.0})).norm() < 1e-2) ++near_minus;
    if ((w - make_vec({2.0, 0.0})).norm() < 1e-2) ++near_plus;
  }
  EXPECT_EQ(near_minus + near_plus, 32);
  EXPECT_GT(near_minus, 0);
  EXPECT_GT(near_plus, 0);
}

TEST(SampleHull, AbsoluteValueExtremePoints) {
  const ScalarField f = ScalarField::from_expression(Expression::parse("abs(x1)", 2));
  const GradientHull h = sample_hull(f, make_vec({0.0, 0.0}), 1e-3, 32, 3);
  for (const auto& w : h.generators()) {
    EXPECT_EQ(std::abs(w[0]), 1.0);
    EXPECT_NEAR(w[1], 0.0, 1e-12);
  }
  EXPECT_NEAR(h.directional_upper(make_vec({1.0, 0.0})), 1.0, 1e-2);
  EXPECT_NEAR(h.directional_upper(make_vec({-1.0, 0.0})), 1.0, 1e-2);
}

TEST(SampleHull, DeterministicInSeed) {
  const ScalarField f = corpus_field("broughton");
  const Vec x = make_vec({0.3, -0.7});
  const auto a = sample_hull(f, x, 1e-2, 0, 9).generators();
  const auto b = sample_hull(f, x, 1e-2, 0, 9).generators();
  ASSERT_EQ(a.size(), static_cast<std::size_t>(default_hull_count(2)));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_THROW(sample_hull(f, x, 1e-2, -1, 9), Error);
}

TEST(PseudoGradient, Singleton) {
  const auto v = pseudo_gradient(hull_of({make_vec({4.0, 0.0})}), 1.0);
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(v->isApprox(make_vec({0.75, 0.0})));
  EXPECT_GT(make_vec({4.0, 0.0}).dot(*v), 1.0);
}

TEST(PseudoGradient, FailsWhenOriginInHull) {
  EXPECT_FALSE(pseudo_gradient(hull_of({make_vec({1.0, 0.0}), make_vec({-1.0, 0.0})}), 0.1).has_value());
}

TEST(PseudoGradient, SegmentHull) {
  const auto v = pseudo_gradient(hull_of({make_vec({1.0, 1.0}), make_vec({1.0, -1.0})}), 0.4);
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(v->isApprox(make_vec({0.75, 0.0}), 1e-10));
  EXPECT_GT(make_vec({1.0, 1.0}).dot(*v), 0.4);
  EXPECT_GT(make_vec({1.0, -1.0}).dot(*v), 0.4);
}

TEST(CriticalResidual, CorpusPoints) {
  EXPECT_LE(critical_residual(corpus_field("double_well"), make_vec({0.0, 0.0}), 1e-6, 16, 1), 1e-4);
  EXPECT_LE(critical_residual(corpus_field("nonsmooth_well"), make_vec({0.0, 0.0}), 1e-6, 16, 1), 1e-4);
  EXPECT_NEAR(critical_residual(corpus_field("broughton"), make_vec({1.0, 1.0}), 1e-6, 16, 1), std::sqrt(10.0), 1e-3);
}

TEST(DirectionalUpper, SublinearAndHomogeneousOnDyadicData) {
  Rng rng(17);
  std::uniform_int_distribution<int> entry(-64, 64), t_dist(1, 32);
  auto dyadic = [&] { return make_vec({entry(rng) / 64.0, entry(rng) / 64.0, entry(rng) / 64.0}); };
  for (int trial = 0; trial < 500; ++trial) {
    const GradientHull h = hull_of({dyadic(), dyadic(), dyadic(), dyadic()});
    const Vec v = dyadic(), u = dyadic();
    const double t = t_dist(rng) / 4.0;
    EXPECT_LE(h.directional_upper(v + u), h.directional_upper(v) + h.directional_upper(u));
    EXPECT_EQ(h.directional_upper(t * v), t * h.directional_upper(v));
  }
}

TEST(Diameter, ShrinksWithRadiusAtSmoothPoints) {
  const ScalarField f = corpus_field("double_well");
  const Vec x = make_vec({0.4, -0.3});
  const double d2 = sample_hull(f, x, 1e-2, 0, 4).diameter();
  const double d3 = sample_hull(f, x, 1e-3, 0, 4).diameter();
  EXPECT_GT(d2, d3);
  EXPECT_NEAR(d2 / d3, 10.0, 1.0);
}

TEST(Calibration, ReturnsDyadicStep) {
  const DirectionCalibration c =
      calibrate_h0(corpus_field("double_well"), {make_vec({0.0, 0.3})}, 0.05, HullParams{1e-3, 0, 1});
  EXPECT_GT(c.h0, 0.0);
  EXPECT_EQ(c.h0, 0.1 / std::ldexp(1.0, c.halvings));
  EXPECT_EQ(c.violations_at_h0, 0);
}

}  // namespace
}  // namespace mpass
