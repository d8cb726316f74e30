#include <gtest/gtest.h>

#include "mpass/corpus.hpp"
#include "mpass/deformation.hpp"
#include "mpass/errors.hpp"

namespace mpass {
namespace {

const Vec kLeft = make_vec({-1.0, 0.0});
const Vec kRight = make_vec({1.0, 0.0});

DescentParams ramp_params(double r1, double r2) {
  DescentParams p;
  p.hull = HullParams{1e-3, 0, 1};
  p.cutoff_inner = r1;
  p.cutoff_outer = r2;
  return p;
}

TEST(Cutoff, RampEndpointsAndMidpoint) {
  const DescentField df =
      DescentField::build(corpus_field("double_well"), {make_vec({0.0, 0.0})}, 0.05, kLeft, kRight, ramp_params(0.1, 0.3));
  EXPECT_EQ(df.cutoff(make_vec({0.0, 0.0})), 1.0);
  EXPECT_EQ(df.cutoff(make_vec({0.5, 0.0})), 0.0);
  EXPECT_NEAR(df.cutoff(make_vec({0.2, 0.0})), 0.5, 1e-12);
  EXPECT_NEAR(smoothstep_cutoff(0.2, 0.1, 0.3), 0.5, 1e-12);
}

TEST(Cutoff, MonotoneRamp) {
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double phi = smoothstep_cutoff(i * 1e-3, 0.25, 0.75);
    EXPECT_LE(phi, prev);
    prev = phi;
  }
}

TEST(DescentField, EmptyHighSetIsZero) {
  const DescentField df = DescentField::build(corpus_field("double_well"), {}, 0.3, kLeft, kRight);
  EXPECT_TRUE(df.empty());
  EXPECT_EQ(df.field_at(make_vec({0.1, 0.2}), 0).value.norm(), 0.0);
  const FlowStepReport r = df.flow(make_vec({0.1, 0.2}), 0.01, 0);
  EXPECT_EQ(r.end, r.start);
  EXPECT_EQ(r.f_drop, 0.0);
}

TEST(DescentField, RejectsHighPointNearEndpoint) {
  EXPECT_THROW(DescentField::build(corpus_field("double_well"), {make_vec({-0.9, 0.0})}, 0.05, kLeft, kRight,
                                   ramp_params(0.1, 0.3)),
               GeometryError);
}

TEST(DescentField, CoreDirectionSatisfiesContract) {
  const ScalarField f = corpus_field("double_well");
  const Vec x = make_vec({0.0, 0.2});
  const DescentField df = DescentField::build(f, {x}, 0.05, kLeft, kRight, ramp_params(0.1, 0.3));
  const FieldSample s = df.field_at(x, 3);
  ASSERT_FALSE(s.near_critical);
  EXPECT_NEAR(s.value.norm(), 0.75, 1e-12);
  EXPECT_GT(f.gradient(x).dot(s.value), 0.05);
  EXPECT_EQ(df.field_at(kLeft, 3).value.norm(), 0.0);
}

TEST(DescentField, NearCriticalPointsAreRecorded) {
  const DescentField df = DescentField::build(corpus_field("double_well"), {make_vec({0.0, 0.3})}, 0.05, kLeft, kRight,
                                              ramp_params(0.1, 0.4));
  const FieldSample s = df.field_at(make_vec({0.0, 0.0}), 1);
  EXPECT_TRUE(s.near_critical);
  EXPECT_EQ(s.value.norm(), 0.0);
}

TEST(Flow, OutsideSupportStaysPut) {
  const DescentField df = DescentField::build(corpus_field("double_well"), {make_vec({0.0, 0.2})}, 0.05, kLeft, kRight,
                                              ramp_params(0.1, 0.3));
  const FlowStepReport r = df.flow(make_vec({0.6, 0.6}), df.h_max(), 1);
  EXPECT_EQ(r.end, r.start);
  EXPECT_EQ(r.f_drop, 0.0);
}

TEST(Flow, CertifiedCoreDescentAndSpeedBound) {
  const ScalarField f = corpus_field("double_well");
  const Vec c = make_vec({0.0, 0.2});
  const double b = 0.05;
  const DescentField df = DescentField::build(f, {c}, b, kLeft, kRight, ramp_params(0.1, 0.3));
  const double h = df.h_max();
  ASSERT_GT(h, 0.0);
  EXPECT_LE(h, df.h0());
  const FlowStepReport core = df.flow(c, h, 5);
  EXPECT_TRUE(core.in_core);
  EXPECT_GT(core.f_drop, b * h / 2.0);

  Rng rng(8);
  for (int k = 0; k < 200; ++k) {
    const Vec x0 = sample_ball(rng, c, df.cutoff_outer());
    const FlowStepReport r = df.flow(x0, h, static_cast<std::uint64_t>(k));
    EXPECT_LE((r.end - x0).norm(), h * (1.0 + 1e-12));
    EXPECT_GE(r.f_drop, -1e-9);
  }
}

TEST(Flow, TraceHasOnePointPerSubstep) {
  const DescentField df = DescentField::build(corpus_field("double_well"), {make_vec({0.0, 0.2})}, 0.05, kLeft, kRight,
                                              ramp_params(0.1, 0.3));
  const FlowStepReport r = df.flow(make_vec({0.0, 0.2}), 1e-3, 0, true);
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(df.substeps() + 1));
  EXPECT_THROW(df.flow(make_vec({0.0, 0.2}), 0.0, 0), Error);
}

}  // namespace
}  // namespace mpass
