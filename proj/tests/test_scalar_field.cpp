#include <gtest/gtest.h>

#include <cmath>

#include "mpass/corpus.hpp"
#include "mpass/errors.hpp"
#include "mpass/expression.hpp"
#include "mpass/scalar_field.hpp"

namespace mpass {
namespace {

using Op = Expression::Op;

int count_ops(const Expression::Node& n, Op op) {
  int c = n.op == op ? 1 : 0;
  for (const auto& a : n.args) c += count_ops(*a, op);
  return c;
}

TEST(Expression, ParsesSumOfSquares) {
  const Expression e = Expression::parse("x1^2 + x2^2", 2);
  EXPECT_EQ(e.root().op, Op::Add);
  EXPECT_EQ(count_ops(e.root(), Op::Pow), 2);
  EXPECT_DOUBLE_EQ(e.evaluate(make_vec({3.0, 4.0})), 25.0);
}

TEST(Expression, ParsesSingleAbs) {
  const Expression e = Expression::parse("abs(x1^2 - 1) + x2^2", 2);
  EXPECT_EQ(count_ops(e.root(), Op::Abs), 1);
  EXPECT_TRUE(e.lipschitz_clean());
}

TEST(Expression, ParsesCubicPolynomial) {
  const Expression e = Expression::parse("x1 + x1^2 * x2", 2);
  EXPECT_DOUBLE_EQ(e.evaluate(make_vec({2.0, -1.0})), -2.0);
}

TEST(Expression, RoundTripsThroughText) {
  for (const char* text : {"x1^2 + x2^2", "max(x1, -x2) / 4 - min(x1, 2)", "norm(x1, x2) + sqrt(x1^2 + 1)"}) {
    const Expression e = Expression::parse(text, 2);
    EXPECT_EQ(Expression::parse(e.to_string(), 2), e) << text;
  }
}

TEST(Expression, ReportsErrorPosition) {
  try {
    Expression::parse("x1 + * x2", 2);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(Expression::parse("x3 + x1", 2), ParseError);
  EXPECT_THROW(Expression::parse("foo(x1)", 2), ParseError);
  EXPECT_THROW(Expression::parse("abs(x1, x2)", 2), ParseError);
  EXPECT_THROW(Expression::parse("(x1 + x2", 2), ParseError);
}

TEST(Expression, FlagsNonLipschitzConstructs) {
  EXPECT_FALSE(Expression::parse("sqrt(x1^2)", 2).lipschitz_clean());
  EXPECT_FALSE(Expression::parse("1 / x1", 2).lipschitz_clean());
  EXPECT_TRUE(Expression::parse("x1 / 2", 2).lipschitz_clean());
}

TEST(Expression, GuardedDomain) {
  const Expression e = Expression::parse("sqrt(x1)", 1);
  EXPECT_THROW(e.evaluate(make_vec({-1.0})), DomainError);
  EXPECT_THROW(Expression::parse("1 / x1", 1).evaluate(make_vec({0.0})), DomainError);
}

TEST(ScalarField, CorpusValues) {
  const ScalarField dw = corpus_field("double_well");
  EXPECT_EQ(dw.evaluate(make_vec({1.0, 0.0})), 0.0);
  EXPECT_EQ(dw.evaluate(make_vec({0.0, 0.0})), 1.0);
  EXPECT_EQ(corpus_field("nonsmooth_well").evaluate(make_vec({0.0, 0.0})), 1.0);
  EXPECT_THROW(dw.evaluate(make_vec({1.0})), DimensionMismatch);
}

TEST(ScalarField, CorpusGradients) {
  const ScalarField dw = corpus_field("double_well");
  EXPECT_EQ(dw.gradient(make_vec({0.0, 0.0})).norm(), 0.0);
  EXPECT_TRUE(dw.gradient(make_vec({1.0, 1.0})).isApprox(make_vec({0.0, 2.0})));
  EXPECT_TRUE(corpus_field("nonsmooth_well").gradient(make_vec({0.5, 0.0})).isApprox(make_vec({-1.0, 0.0})));
}

TEST(ScalarField, NonsmoothLocusIsSignalled) {
  EXPECT_THROW(corpus_field("nonsmooth_well").gradient(make_vec({1.0, 0.3})), NonsmoothPoint);
}

TEST(ScalarField, ExactGradientMatchesFiniteDifferences) {
  Rng rng(11);
  for (const auto& info : corpus_catalog()) {
    const ScalarField f = corpus_field(info.name);
    for (int k = 0; k < 100; ++k) {
      const Vec x = sample_box(rng, Box::cube(2, 3.0));
      if (f.is_nonsmooth_at(x)) continue;
      const Vec g = f.gradient(x);
      EXPECT_LE((g - f.finite_difference_gradient(x)).norm(), 1e-5 * (1.0 + g.norm())) << info.name;
    }
  }
}

TEST(ScalarField, ExpressionGradientMatchesCorpus) {
  const ScalarField parsed = ScalarField::from_expression(Expression::parse("abs(x1^2 - 1) + x2^2", 2));
  const ScalarField corpus = corpus_field("nonsmooth_well");
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vec x = sample_box(rng, Box::cube(2, 2.0));
    EXPECT_DOUBLE_EQ(parsed.evaluate(x), corpus.evaluate(x));
    EXPECT_LE((parsed.gradient(x) - corpus.gradient(x)).norm(), 1e-12);
  }
}

TEST(ScalarField, LiftAddsSquares) {
  const ScalarField f = corpus_field("linear", 3);
  EXPECT_EQ(f.dim(), 3);
  EXPECT_DOUBLE_EQ(f.evaluate(make_vec({2.0, 5.0, 3.0})), 11.0);
  EXPECT_THROW(corpus_field("missing"), Error);
}

}  // namespace
}  // namespace mpass
