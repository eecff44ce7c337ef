#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hamsolve/errors.hpp"
#include "hamsolve/grid.hpp"

using namespace hamsolve;
using std::numbers::pi;

namespace {

Grid cheb(int n, double a = 0.0, double b = 1.0) { return build_grid(GridKind::ChebyshevLobatto, n, a, b); }

GridFunction sample(const Grid& g, const char* text) { return g.sample(parse_expr(text)); }

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

BoundaryCondition left(int k, double v) { return {Side::Left, k, v}; }
BoundaryCondition right(int k, double v) { return {Side::Right, k, v}; }

}  // namespace

TEST(BuildGrid, ChebyshevNodesOnReferenceInterval) {
  const Grid g = cheb(8, -1.0, 1.0);
  ASSERT_EQ(g.size(), 8);
  EXPECT_EQ(g.nodes()(0), -1.0);
  EXPECT_EQ(g.nodes()(7), 1.0);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(g.nodes()(j), -std::cos(j * pi / 7), 1e-15);
}

TEST(BuildGrid, NodesIncreaseAndHitEndpoints) {
  for (GridKind kind : {GridKind::ChebyshevLobatto, GridKind::UniformFd}) {
    const Grid g = build_grid(kind, 33, -0.5, 2.0);
    EXPECT_EQ(g.nodes()(0), -0.5);
    EXPECT_EQ(g.nodes()(32), 2.0);
    for (int i = 1; i < g.size(); ++i) EXPECT_GT(g.nodes()(i), g.nodes()(i - 1));
  }
}

TEST(BuildGrid, RejectsBadParameters) {
  EXPECT_THROW(cheb(7), ConfigError);
  EXPECT_THROW(cheb(16, 1.0, 1.0), ConfigError);
  EXPECT_THROW(cheb(16, 2.0, 1.0), ConfigError);
  EXPECT_THROW(cheb(16).diff(5), RangeError);
}

TEST(BuildGrid, FirstDerivativeOfR) {
  const Grid g = cheb(16, -1.0, 1.0);
  const GridFunction d = g.diff(1) * g.nodes();
  EXPECT_LT((d - GridFunction::Ones(16)).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(BuildGrid, QuadratureExamples) {
  const Grid g = cheb(16);
  EXPECT_NEAR(g.weights().dot(g.nodes().cwiseProduct(g.nodes())), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(integrate(GridFunction::Ones(16), cheb(16, 0.0, 2.0)), 2.0, 1e-12);
  EXPECT_NEAR(integrate(g.nodes(), g), 0.5, 1e-12);
  const Grid g32 = cheb(32);
  EXPECT_NEAR(integrate(sample(g32, "sin(pi*r)^2"), g32), 0.5, 1e-10);
  for (GridKind kind : {GridKind::ChebyshevLobatto, GridKind::UniformFd}) {
    for (int n : {8, 9, 64}) {
      const Grid h = build_grid(kind, n, -1.0, 2.5);
      EXPECT_NEAR(h.weights().sum(), 3.5, 1e-12);
    }
  }
}

// r^k -> k! holds to 1e-8 relative while the rounding in D_k (which grows like n^(2k))
// stays below it.
TEST(BuildGrid, DerivativeOfPowerIsFactorial) {
  for (int n : {8, 12, 16}) {
    const Grid g = cheb(n);
    for (int k = 1; k <= 4; ++k) {
      const GridFunction rk = g.nodes().array().pow(k).matrix();
      const GridFunction d = g.diff(k) * rk;
      EXPECT_LT((d.array() - factorial(k)).abs().maxCoeff(), 1e-8 * factorial(k)) << "n " << n << " k " << k;
    }
  }
  for (int n : {32, 64}) {
    const Grid g = cheb(n);
    for (int k = 1; k <= 2; ++k) {
      const GridFunction d = g.diff(k) * g.nodes().array().pow(k).matrix();
      EXPECT_LT((d.array() - factorial(k)).abs().maxCoeff(), 1e-8 * factorial(k)) << "n " << n << " k " << k;
    }
  }
}

TEST(BuildGrid, SecondDerivativeIsSquareOfFirst) {
  for (int n : {8, 16, 32, 64}) {
    for (double a : {-1.0, 0.0}) {
      const Grid g = cheb(n, a, 1.0);
      const Eigen::MatrixXd D1 = g.diff(1);
      EXPECT_LT((g.diff(2) - D1 * D1).cwiseAbs().maxCoeff(), 1e-8) << n;
    }
  }
}

TEST(BuildGrid, UniformDerivativesConvergeAtSchemeOrder) {
  // Error on sin should drop by about 2^2 per halving of h for the
  // second-order stencils.
  for (int k = 1; k <= 4; ++k) {
    double prev = 0.0;
    for (int n : {41, 81, 161}) {
      const Grid g = build_grid(GridKind::UniformFd, n, 0.0, 1.0);
      const GridFunction f = sample(g, "sin(2*r)");
      const GridFunction exact = g.sample(parse_expr(k == 1   ? "2*cos(2*r)"
                                                     : k == 2 ? "-4*sin(2*r)"
                                                     : k == 3 ? "-8*cos(2*r)"
                                                              : "16*sin(2*r)"));
      const double err = (g.diff(k) * f - exact).lpNorm<Eigen::Infinity>();
      if (prev > 0.0) {
        EXPECT_GT(prev / err, 3.0) << "k " << k << " n " << n;
      }
      prev = err;
    }
  }
}

TEST(BuildGrid, InterpolateReproducesPolynomials) {
  const Grid g = cheb(16, -1.0, 2.0);
  const GridFunction f = sample(g, "r^3 - 2*r + 1");
  for (double x : {-1.0, -0.3, 0.123, 1.7, 2.0}) EXPECT_NEAR(g.interpolate(f, x), x * x * x - 2 * x + 1, 1e-12);
  const Grid u = build_grid(GridKind::UniformFd, 11, 0.0, 1.0);
  EXPECT_NEAR(u.interpolate(u.nodes(), 0.37), 0.37, 1e-15);
}

TEST(AssembleLinear, Examples) {
  const Grid g = cheb(32);
  EXPECT_LT(((assemble_linear(LinearOperator::derivative(2), g) * sample(g, "r^2")).array() - 2.0).abs().maxCoeff(),
            1e-8);
  const Eigen::MatrixXd I = assemble_linear(LinearOperator({Expr::constant(1.0)}), g);
  EXPECT_EQ((I - Eigen::MatrixXd::Identity(32, 32)).lpNorm<Eigen::Infinity>(), 0.0);
  const Eigen::MatrixXd A = assemble_linear(LinearOperator({Expr::constant(1.0), Expr::constant(1.0)}), g);
  EXPECT_LT((A * sample(g, "exp(-r)")).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(AssembleLinear, VariableCoefficients) {
  const Grid g = cheb(24);
  // (1 + r) u'' + r u' - u on u = r^3: 6r(1+r) + 3r^3 - r^3
  const LinearOperator op({Expr::constant(-1.0), parse_expr("r"), parse_expr("1 + r")});
  const GridFunction got = assemble_linear(op, g) * sample(g, "r^3");
  EXPECT_LT((got - sample(g, "6*r*(1 + r) + 2*r^3")).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(AssembleLinear, Errors) {
  const Grid g = cheb(16);
  EXPECT_THROW(assemble_linear(LinearOperator({Expr::constant(1.0), parse_expr("r")}), g), SingularOperatorError);
  EXPECT_THROW(assemble_linear(LinearOperator({Expr::constant(1.0), Expr::constant(0.0)}), g), SingularOperatorError);
  EXPECT_THROW(LinearOperator({Expr::u(0)}), ConfigError);
  EXPECT_THROW(LinearOperator(std::vector<Expr>{}), ConfigError);
}

TEST(SolveWithBcs, Examples) {
  const Grid g = cheb(32);
  const GridFunction u1 =
      solve_with_bcs(assemble_linear(LinearOperator::derivative(2), g), GridFunction::Zero(32), {left(0, 0), right(0, 1)}, g);
  EXPECT_LT((u1 - g.nodes()).lpNorm<Eigen::Infinity>(), 1e-10);
  const GridFunction u2 =
      solve_with_bcs(assemble_linear(LinearOperator::derivative(1), g), GridFunction::Ones(32), {left(0, 0)}, g);
  EXPECT_LT((u2 - g.nodes()).lpNorm<Eigen::Infinity>(), 1e-10);
  const GridFunction u3 = solve_with_bcs(assemble_linear(LinearOperator::derivative(2), g),
                                         sample(g, "-pi^2*sin(pi*r)"), {left(0, 0), right(0, 0)}, g);
  EXPECT_LT((u3 - sample(g, "sin(pi*r)")).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(SolveWithBcs, RightInverseOnInteriorRows) {
  const Grid g = cheb(48, -1.0, 1.0);
  const Eigen::MatrixXd A = assemble_linear(LinearOperator({parse_expr("2 + r"), Expr::constant(0.0), Expr::constant(1.0)}), g);
  const std::vector<BoundaryCondition> bcs{left(1, 0.5), right(0, -1.0)};
  const GridFunction rhs = sample(g, "exp(r)*cos(3*r)");
  const GridFunction u = solve_with_bcs(A, rhs, bcs, g);
  const auto rows = bc_rows(bcs, g.size());
  const GridFunction Au = A * u;
  for (int i = 0; i < g.size(); ++i) {
    if (std::find(rows.begin(), rows.end(), i) != rows.end()) continue;
    EXPECT_LT(std::abs(Au(i) - rhs(i)), 1e-9 * rhs.lpNorm<Eigen::Infinity>());
  }
  EXPECT_NEAR(bc_functional(bcs[0], g).dot(u), 0.5, 1e-10);
  EXPECT_NEAR(u(g.size() - 1), -1.0, 1e-12);
}

TEST(SolveWithBcs, SpectralRefinement) {
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const Grid g = cheb(n);
    const GridFunction u = solve_with_bcs(assemble_linear(LinearOperator::derivative(2), g),
                                          sample(g, "-pi^2*sin(pi*r)"), {left(0, 0), right(0, 0)}, g);
    const double err = (u - sample(g, "sin(pi*r)")).lpNorm<Eigen::Infinity>();
    if (prev > 1e-10) {
      EXPECT_LT(err, prev / 10.0) << n;
    }
    prev = err;
  }
  EXPECT_LT(prev, 1e-10);
}

TEST(SolveWithBcs, Errors) {
  const Grid g = cheb(16);
  const Eigen::MatrixXd D2 = assemble_linear(LinearOperator::derivative(2), g);
  // one condition for a second-order operator leaves a row of D2 with no pivot
  EXPECT_THROW(solve_with_bcs(D2, GridFunction::Zero(16), {left(0, 0)}, g), SingularSystemError);
  EXPECT_THROW(solve_with_bcs(D2, GridFunction::Zero(16), {left(0, 0), right(2, 0)}, g), ConfigError);
  // pure Neumann: constants are in the kernel
  EXPECT_THROW(solve_with_bcs(D2, GridFunction::Zero(16), {left(1, 0), right(1, 0)}, g), SingularSystemError);
}

TEST(SolveWithBcs, InitialValueProblemAtOneEnd) {
  const Grid g = cheb(32, 0.0, 2.0);
  // u'' + u = 0, u(0) = 0, u'(0) = 1 -> sin r
  const Eigen::MatrixXd A = assemble_linear(LinearOperator({Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0)}), g);
  const GridFunction u = solve_with_bcs(A, GridFunction::Zero(32), {left(0, 0), left(1, 1)}, g);
  EXPECT_LT((u - sample(g, "sin(r)")).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(GridHelpers, DerivativeTableAndEvaluate) {
  const Grid g = cheb(20);
  const GridFunction u = sample(g, "r^3");
  const auto t = derivative_table(g, u, 3);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_LT((t[3].array() - 6.0).abs().maxCoeff(), 1e-8);
  const GridFunction e = evaluate_on_grid(parse_expr("u' - 3*r^2 + u''*r"), g, u);
  EXPECT_LT((e - sample(g, "6*r^2")).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_EQ(parse_grid_kind("uniform"), GridKind::UniformFd);
  EXPECT_EQ(parse_grid_kind("chebyshev-lobatto"), GridKind::ChebyshevLobatto);
  EXPECT_THROW(parse_grid_kind("legendre"), ConfigError);
}
