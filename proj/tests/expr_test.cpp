#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hamsolve/errors.hpp"
#include "hamsolve/expr.hpp"
#include "hamsolve/poly_oracle.hpp"

using namespace hamsolve;

namespace {

PointValues at(double r, std::initializer_list<double> u) {
  PointValues v;
  v.r = r;
  std::size_t k = 0;
  for (double x : u) v.u[k++] = x;
  return v;
}

double eval_text(const char* text, const PointValues& v) { return eval_expr(parse_expr(text), v); }

}  // namespace

TEST(EvalExpr, Examples) {
  EXPECT_EQ(eval_expr(pow(Expr::u(0), 2.0), at(0.0, {3.0})), 9.0);
  EXPECT_EQ(eval_expr(Expr::u(1) + pow(Expr::u(0), 2.0) + (-1.0) * Expr::constant(1.0), at(0.0, {0.0, 1.0})),
            0.0);
  EXPECT_EQ(eval_expr(apply(UnaryFn::Exp, Expr::u(0)) * Expr::indep(), at(2.0, {0.0})), 2.0);
}

TEST(EvalExpr, DomainErrors) {
  EXPECT_THROW(eval_text("log(u)", at(0.0, {0.0})), DomainError);
  EXPECT_THROW(eval_text("log(u)", at(0.0, {-2.0})), DomainError);
  EXPECT_THROW(eval_text("sqrt(u - 1)", at(0.0, {0.5})), DomainError);
  EXPECT_THROW(eval_text("u^0.5", at(0.0, {-1.0})), DomainError);
  EXPECT_NO_THROW(eval_text("u^3", at(0.0, {-1.0})));
}

TEST(Parser, PrecedenceAndAssociativity) {
  const PointValues v = at(0.5, {3.0, 2.0, 1.0});
  EXPECT_EQ(eval_text("1 + 2*3", v), 7.0);
  EXPECT_EQ(eval_text("2^3^2", v), 512.0);
  EXPECT_EQ(eval_text("-u^2", v), -9.0);
  EXPECT_EQ(eval_text("(1 + 2)*3", v), 9.0);
  EXPECT_EQ(eval_text("8/2/2", v), 2.0);
  EXPECT_EQ(eval_text("u'' + u' * u", v), 7.0);
  EXPECT_DOUBLE_EQ(eval_text("sin(pi*r)", v), 1.0);
  EXPECT_DOUBLE_EQ(eval_text("-pi^2*sin(pi*r) + sin(pi*r)^2", v), 1.0 - std::numbers::pi * std::numbers::pi);
  EXPECT_DOUBLE_EQ(eval_text("1e-3*u + 2.5E2", v), 250.003);
}

TEST(Parser, Structure) {
  const Expr e = parse_expr("u'''' + r*u'' + u^2");
  EXPECT_EQ(e.max_derivative_order(), 4);
  EXPECT_TRUE(e.depends_on_r());
  EXPECT_FALSE(parse_expr("exp(-r)").depends_on_u());
  EXPECT_EQ(parse_expr("3").max_derivative_order(), -1);
  EXPECT_TRUE(parse_expr("0").is_zero_constant());
  // constant calls fold
  EXPECT_EQ(parse_expr("exp(0)").kind(), Expr::Kind::Const);
}

TEST(Parser, Errors) {
  EXPECT_THROW(parse_expr("u'''''"), ParseError);
  EXPECT_THROW(parse_expr("u^u"), ParseError);
  EXPECT_THROW(parse_expr("foo(u)"), ParseError);
  EXPECT_THROW(parse_expr("1 +"), ParseError);
  EXPECT_THROW(parse_expr("(u"), ParseError);
  EXPECT_THROW(parse_expr("u v"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
  EXPECT_THROW(parse_expr("log(-1)"), ParseError);
}

TEST(Parser, RoundTripsThroughToString) {
  for (const char* text : {"u' + u^2 - 1", "exp(u)*r", "-pi^2*sin(pi*r)", "tanh(u'') / (1 + r^2)"}) {
    const Expr e = parse_expr(text);
    const Expr again = parse_expr(e.to_string());
    const PointValues v = at(0.3, {0.7, -0.4, 1.1});
    EXPECT_DOUBLE_EQ(eval_expr(again, v), eval_expr(e, v)) << text;
  }
}

TEST(UOrder, OutOfRangeThrows) {
  EXPECT_THROW(Expr::u(5), ConfigError);
  EXPECT_THROW(Expr::u(-1), ConfigError);
}

TEST(JetExpand, Examples) {
  const std::vector<Jet> sq{Jet{1.0, 2.0, 3.0}};
  EXPECT_EQ(jet_expand(pow(Expr::u(0), 2.0), 0.0, sq), (Jet{1.0, 4.0, 10.0}));
  const std::vector<Jet> abc{Jet{0.25, -1.5, 7.0}};
  EXPECT_EQ(jet_expand(Expr::u(0), 0.0, abc), abc[0]);
  const std::vector<Jet> p{Jet{0.0, 1.0, 0.0}};
  const Jet e = jet_expand(apply(UnaryFn::Exp, Expr::u(0)), 0.0, p);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], 1.0);
  EXPECT_DOUBLE_EQ(e[2], 0.5);
}

TEST(JetExpand, DomainErrorPropagates) {
  const std::vector<Jet> u{Jet{-1.0, 1.0}};
  EXPECT_THROW(jet_expand(parse_expr("log(u)"), 0.0, u), DomainError);
}

TEST(JetExpand, ConstantTermEqualsEval) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-0.9, 0.9);
  const char* exprs[] = {"u' + u^2 - 1", "exp(u)*r + sin(u')", "log(2 + u)*cos(u'')", "tanh(u*r) + sqrt(3 + u'^2)",
                         "u'''' - r*u''' + u^3/(1 + u^2)"};
  for (const char* text : exprs) {
    const Expr e = parse_expr(text);
    for (int t = 0; t < 10; ++t) {
      std::vector<Jet> jets;
      PointValues v;
      v.r = d(rng);
      for (int k = 0; k <= kMaxDerivativeOrder; ++k) {
        std::vector<double> c(5);
        for (double& x : c) x = d(rng);
        v.u[static_cast<std::size_t>(k)] = c[0];
        jets.emplace_back(c);
      }
      EXPECT_NEAR(jet_expand(e, v.r, jets)[0], eval_expr(e, v), 1e-14) << text;
    }
  }
}

TEST(JetExpand, AnalyticCompositionMatchesNestedJets) {
  // exp(sin(u)) on the series equals exp applied to the sin jet.
  const std::vector<Jet> u{Jet{0.3, -0.2, 0.5, 0.1, -0.4}};
  const Jet direct = hamsolve::exp(hamsolve::sin(u[0]));
  const Jet via = jet_expand(parse_expr("exp(sin(u))"), 0.0, u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(via[k], direct[k], 1e-15);
}

TEST(JetExpand, MatchesPolynomialOracle) {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> len_dist(1, 6);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  for (int t = 0; t < 100; ++t) {
    const auto tree = oracle::random_tree(rng, 4, kMaxDerivativeOrder);
    ASSERT_LE(oracle::u_degree(tree), 4);
    const std::size_t len = static_cast<std::size_t>(len_dist(rng));
    const double r = val(rng);
    std::vector<oracle::Poly> series;
    std::vector<Jet> jets;
    for (int k = 0; k <= kMaxDerivativeOrder; ++k) {
      oracle::Poly p(len);
      for (double& x : p) x = val(rng);
      series.push_back(p);
      jets.emplace_back(p);
    }
    oracle::Poly want = oracle::expand(tree, r, series);
    want.resize(len, 0.0);
    const Jet got = jet_expand(parse_expr(oracle::render(tree)), r, jets);
    double scale = 0.0;
    for (double x : want) scale = std::max(scale, std::abs(x));
    for (std::size_t k = 0; k < len; ++k) {
      EXPECT_LE(std::abs(got[k] - want[k]), 1e-12 * scale) << oracle::render(tree) << " coefficient " << k;
    }
  }
}
