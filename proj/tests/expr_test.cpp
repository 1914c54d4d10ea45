#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinlie/expr.hpp"
#include "spinlie/fixtures.hpp"

using namespace spinlie;
using Op = Expression::Op;

namespace {

std::vector<std::string> names(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

Point pt(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), x.begin());
  return x;
}

}  // namespace

TEST(Parse, SumOfProduct) {
  const auto coords = names({"x"});
  const Expression e = parse("x*x + 1", coords);
  ASSERT_EQ(e.root().op, Op::Add);
  EXPECT_EQ(e.root().lhs->op, Op::Mul);
  EXPECT_EQ(e.root().lhs->lhs->op, Op::Variable);
  EXPECT_EQ(e.root().rhs->op, Op::Constant);
  EXPECT_EQ(e.root().rhs->value, 1.0);
  EXPECT_EQ(evalValue(e, pt({3.0})), 10.0);
}

TEST(Parse, FunctionTimesVariable) {
  const Expression e = parse("sin(x)*y", names({"x", "y"}));
  ASSERT_EQ(e.root().op, Op::Mul);
  EXPECT_EQ(e.root().lhs->op, Op::Sin);
  EXPECT_EQ(e.root().rhs->op, Op::Variable);
  EXPECT_EQ(e.root().rhs->index, 1);
}

TEST(Parse, TrailingOperatorReportsOffset) {
  try {
    parse("x +", names({"x"}));
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_NE(std::string(e.what()).find("offset 3"), std::string::npos);
  }
}

TEST(Parse, Errors) {
  const auto coords = names({"x", "y"});
  EXPECT_THROW(parse("", coords), ParseError);
  EXPECT_THROW(parse("   ", coords), ParseError);
  EXPECT_THROW(parse("z + 1", coords), InputError);  // unknown identifier
  EXPECT_THROW(parse("(x + 1", coords), ParseError);
  EXPECT_THROW(parse("x ^ 0.5", coords), ParseError);  // integer powers only
  EXPECT_THROW(parse("2x", coords), ParseError);        // no implicit product
  EXPECT_THROW(parse("foo(x)", coords), InputError);
  EXPECT_THROW(parse("x $ y", coords), ParseError);
}

TEST(Parse, PrecedenceAndAssociativity) {
  const auto c = names({"x", "y"});
  const Point p = pt({2.0, 3.0});
  EXPECT_DOUBLE_EQ(evalValue(parse("x - y - 1", c), p), -2.0);
  EXPECT_DOUBLE_EQ(evalValue(parse("x / y / 2", c), p), 2.0 / 3.0 / 2.0);
  EXPECT_DOUBLE_EQ(evalValue(parse("-x^2", c), p), -4.0);  // power binds tighter than minus
  EXPECT_DOUBLE_EQ(evalValue(parse("(-x)^2", c), p), 4.0);
  EXPECT_DOUBLE_EQ(evalValue(parse("x + y * 2", c), p), 8.0);
  EXPECT_DOUBLE_EQ(evalValue(parse("(x + y) * 2", c), p), 10.0);
  EXPECT_DOUBLE_EQ(evalValue(parse("x^-2", c), p), 0.25);
  EXPECT_DOUBLE_EQ(evalValue(parse("2*pi", c), p), 2.0 * M_PI);
  EXPECT_DOUBLE_EQ(evalValue(parse("1.5e-1 * 2E1", c), p), 3.0);
}

TEST(Evaluate, DimensionMismatch) {
  const Expression e = parse("x0", names({"x0", "x1"}));
  EXPECT_THROW(evalValue(e, pt({1.0})), InputError);
}

TEST(Evaluate, DomainErrorsNameTheNode) {
  const auto c = names({"x"});
  const Point zero = pt({0.0});
  for (const char* src : {"log(x)", "1/x", "sqrt(x - 1)", "x^-1"}) {
    try {
      evalValue(parse(src, c), zero);
      FAIL() << src;
    } catch (const DomainError& e) {
      EXPECT_FALSE(std::string(e.what()).empty());
    }
  }
  try {
    evalValue(parse("log(x)", c), pt({-1.0}));
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("log"), std::string::npos) << e.what();
  }
}

TEST(EvalDual, Identity) {
  const DualValue d = evalDual(parse("x0", names({"x0"})), pt({3.0}));
  EXPECT_EQ(d.value, 3.0);
  ASSERT_EQ(d.grad.size(), 1);
  EXPECT_EQ(d.grad[0], 1.0);
}

TEST(EvalDual, Square) {
  const DualValue d = evalDual(parse("x0*x0", names({"x0"})), pt({3.0}));
  EXPECT_EQ(d.value, 9.0);
  EXPECT_EQ(d.grad[0], 6.0);
}

TEST(EvalDual, MatchesFiniteDifferences) {
  const Expression e = parse("sin(x0)*x1", names({"x0", "x1"}));
  const Point p = pt({0.7, 2.0});
  const DualValue d = evalDual(e, p);
  EXPECT_LE((d.grad - fdGradient(e, p, 1e-5)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(d.grad[0], std::cos(0.7) * 2.0, 1e-15);
  EXPECT_NEAR(d.grad[1], std::sin(0.7), 1e-15);
}

TEST(EvalDual, ConstantHasSizedZeroGradient) {
  const DualValue d = evalDual(parse("4", names({"a", "b", "c"})), pt({1, 2, 3}));
  EXPECT_EQ(d.value, 4.0);
  ASSERT_EQ(d.grad.size(), 3);
  EXPECT_EQ(d.grad.cwiseAbs().maxCoeff(), 0.0);
}

TEST(EvalDual, EveryFunctionByHand) {
  const auto c = names({"x"});
  const double x = 0.3;
  struct Case {
    const char* src;
    double value, derivative;
  } cases[] = {
      {"sqrt(x)", std::sqrt(x), 0.5 / std::sqrt(x)},
      {"sin(x)", std::sin(x), std::cos(x)},
      {"cos(x)", std::cos(x), -std::sin(x)},
      {"exp(x)", std::exp(x), std::exp(x)},
      {"log(x)", std::log(x), 1.0 / x},
      {"x^3", x * x * x, 3 * x * x},
      {"x^-2", 1 / (x * x), -2 / (x * x * x)},
      {"1/x", 1 / x, -1 / (x * x)},
      {"-x", -x, -1.0},
  };
  for (const auto& k : cases) {
    const DualValue d = evalDual(parse(k.src, c), pt({x}));
    EXPECT_NEAR(d.value, k.value, 1e-14) << k.src;
    EXPECT_NEAR(d.grad[0], k.derivative, 1e-12) << k.src;
  }
}

TEST(FdGradient, ConstantIsZero) {
  const Eigen::VectorXd g = fdGradient(parse("2.5", names({"x", "y"})), pt({0.1, 0.2}), 1e-5);
  EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FdGradient, LinearIsExact) {
  const Eigen::VectorXd g = fdGradient(parse("3.25*x0", names({"x0", "x1"})), pt({0.4, -1}), 1e-3);
  EXPECT_NEAR(g[0], 3.25, 1e-10);
  EXPECT_NEAR(g[1], 0.0, 1e-10);
}

TEST(FdGradient, ExponentialTaylorBound) {
  const Eigen::VectorXd g = fdGradient(parse("exp(x0)", names({"x0"})), pt({0.0}), 1e-5);
  EXPECT_NEAR(g[0], 1.0, 1e-9);
}

TEST(FdGradient, RejectsNonPositiveStep) {
  const Expression e = parse("x", names({"x"}));
  EXPECT_THROW(fdGradient(e, pt({0.0}), 0.0), InputError);
  EXPECT_THROW(fdGradient(e, pt({0.0}), -1e-3), InputError);
}

TEST(FdGradient, PropagatesDomainErrors) {
  EXPECT_THROW(fdGradient(parse("log(x)", names({"x"})), pt({1e-7}), 1e-5), DomainError);
}

TEST(RoundTrip, PrintParsePrint) {
  const auto c = names({"x", "y"});
  for (const char* src : {"x*x + 1", "-x^2 - (y - 1)/3", "sin(x)*cos(y)^-2", "exp(log(1 + x^2))",
                          "sqrt(2*pi) - -x", "1e-30*x + 12345.678"}) {
    const Expression e = parse(src, c);
    const Expression back = parse(e.toString(), c);
    EXPECT_TRUE(structurallyEqual(e, back)) << src << " -> " << e.toString();
    EXPECT_EQ(back.toString(), e.toString());
  }
}

TEST(RoundTrip, StructuralEqualityDistinguishesTrees) {
  const auto c = names({"x", "y"});
  EXPECT_FALSE(structurallyEqual(parse("x + y", c), parse("y + x", c)));
  EXPECT_FALSE(structurallyEqual(parse("x^2", c), parse("x^3", c)));
  EXPECT_TRUE(structurallyEqual(parse("(x + y)", c), parse("x+y", c)));
}

// Random trees of depth <= 6: dual gradients vs central differences.
TEST(RandomExpressions, DualMatchesFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const auto c = std::make_shared<const std::vector<std::string>>(names({"x0", "x1", "x2"}));
  for (int i = 0; i < 500; ++i) {
    const Expression e = randomExpression(c, rng, 6);
    const Point p = Point::NullaryExpr(3, [&] { return coord(rng); });
    const DualValue d = evalDual(e, p);
    const Eigen::VectorXd fd = fdGradient(e, p, 1e-5);
    for (int mu = 0; mu < 3; ++mu)
      ASSERT_LE(std::abs(d.grad[mu] - fd[mu]), 1e-5 * (1 + std::abs(d.grad[mu]))) << e.toString();
    ASSERT_TRUE(structurallyEqual(parse(e.toString(), c), e)) << e.toString();
  }
}
