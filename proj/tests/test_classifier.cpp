#include <gtest/gtest.h>

#include <cmath>

#include "mpass/classifier.hpp"
#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/minimax.hpp"

namespace mpass {
namespace {

TEST(TangencyResidual, CollinearOrthogonalAntiparallel) {
  EXPECT_EQ(tangency_residual(make_vec({1.0, 0.0}), make_vec({2.0, 0.0})), 0.0);
  EXPECT_EQ(tangency_residual(make_vec({1.0, 0.0}), make_vec({0.0, 3.0})), 1.0);
  EXPECT_NEAR(*tangency_residual(make_vec({3.0, 4.0}), make_vec({-3.0, -4.0})), 0.0, 1e-15);
}

TEST(TangencyResidual, SentinelAndRejection) {
  EXPECT_FALSE(tangency_residual(make_vec({1.0, 2.0}), make_vec({0.0, 1e-15})).has_value());
  EXPECT_THROW(tangency_residual(make_vec({0.0, 0.0}), make_vec({1.0, 0.0})), Error);
}

TEST(TangencyResidual, MatchesSineOfAngle) {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const Vec x = sample_sphere(rng, 4, 1.0 + 10.0 * k), v = sample_sphere(rng, 4, 0.01 + k);
    const double cosine = x.dot(v) / (x.norm() * v.norm());
    EXPECT_NEAR(*tangency_residual(x, v), std::sqrt(std::max(0.0, 1.0 - cosine * cosine)), 1e-12);
  }
}

TEST(PsResidual, Examples) {
  const HullParams hp{1e-6, 16, 1};
  EXPECT_EQ(ps_residual(corpus_field("double_well"), make_vec({0.0, 0.0}), hp), 0.0);
  for (double R : {10.0, 100.0}) EXPECT_NEAR(ps_residual(corpus_field("linear"), make_vec({R, 0.0}), hp), R, 1e-9 * R);
}

TEST(Classify, DoubleWellIsCritical) {
  const MinimaxRun run = solve(default_problem("double_well"));
  const Classification c = classify(run);
  EXPECT_EQ(c.verdict, Verdict::Critical);
  EXPECT_EQ(c.branch, "bounded");
  ASSERT_TRUE(c.critical_witness.has_value());
  EXPECT_LE(c.critical_witness->point.norm(), 5e-2);
  EXPECT_NEAR(c.critical_witness->value, 1.0, 1e-3);
  EXPECT_LE(c.critical_witness->residual, 1e-3);
  EXPECT_NEAR(run.c_best, 1.0, 1e-3);
}

TEST(Classify, NonsmoothWellIsCritical) {
  const Classification c = classify(solve(default_problem("nonsmooth_well")));
  EXPECT_EQ(c.verdict, Verdict::Critical);
  ASSERT_TRUE(c.critical_witness.has_value());
  EXPECT_LE(c.critical_witness->point.norm(), 5e-2);
  EXPECT_LE(c.critical_witness->residual, 1e-3);
}

TEST(Classify, RequiresCompletedRounds) {
  EXPECT_THROW(classify(start_run(default_problem("double_well"))), Error);
}

TEST(Verdict, Names) {
  EXPECT_STREQ(verdict_name(Verdict::Critical), "Critical");
  EXPECT_STREQ(verdict_name(Verdict::TangencyAtInfinity), "TangencyAtInfinity");
  EXPECT_STREQ(verdict_name(Verdict::Inconclusive), "Inconclusive");
}

}  // namespace
}  // namespace mpass
