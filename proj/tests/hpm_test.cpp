#include <cmath>

#include <gtest/gtest.h>

#include "hamsolve/benchmarks.hpp"
#include "hamsolve/errors.hpp"
#include "hamsolve/hpm.hpp"

using namespace hamsolve;

namespace {
double inf(const GridFunction& v) { return v.lpNorm<Eigen::Infinity>(); }
}  // namespace

TEST(HpmConfig, FixedParameters) {
  const auto c = find_case("manufactured-quad");
  const HamConfig cfg = hpm_config(c.spec);
  EXPECT_EQ(cfg.lopt_mode(), LoptMode::UseL);
  EXPECT_EQ(cfg.hbar(), -1.0);
  EXPECT_EQ(cfg.aux().kind(), Expr::Kind::Const);
  EXPECT_EQ(cfg.aux().value(), 1.0);
  EXPECT_EQ(cfg.order(), 10);
  const auto lin = find_case("linear-poisson");
  const SeriesSolution s = run_ham(lin.spec, hpm_config(lin.spec, 1));
  EXPECT_LT(error_vs_exact(lin, partial_sum(s, 1)), 1e-10);
}

TEST(HpmRecursion, TanhTerms) {
  const auto c = find_case("riccati-tanh-short");
  const SeriesSolution w = hpm_recursion(c.spec, 3);
  const Grid g = make_grid(c.spec.grid);
  EXPECT_LT(inf(w.orders[1] - g.nodes()), 1e-12);
  EXPECT_LT(inf(w.orders[2]), 1e-12);
  EXPECT_LT(inf(w.orders[3] + g.nodes().array().cube().matrix() / 3.0), 1e-12);
}

TEST(HpmRecursion, LinearStopsAfterFirstOrder) {
  const auto c = find_case("linear-poisson");
  const SeriesSolution w = hpm_recursion(c.spec, 6);
  EXPECT_LT(error_vs_exact(c, w.orders[0] + w.orders[1]), 1e-10);
  for (int m = 2; m <= 6; ++m) EXPECT_LT(inf(w.orders[static_cast<std::size_t>(m)]), 1e-10);
}

TEST(HpmRecursion, ManufacturedFirstOrder) {
  ProblemSpec p = find_case("manufactured-quad").spec;
  p.bcs = {{Side::Left, 0, 0.5}, {Side::Right, 0, 1.0}};
  const SeriesSolution w = hpm_recursion(p, 2);
  const Grid g = make_grid(p.grid);
  const GridFunction u0 = w.orders[0];
  EXPECT_LT(inf(u0 - (0.5 + 0.5 * g.nodes().array()).matrix()), 1e-12);
  const GridFunction forcing = g.sample(p.source) - g.diff(2) * u0 - u0.cwiseProduct(u0);
  const GridFunction w1 = solve_with_bcs(g.diff(2), forcing, {{Side::Left, 0, 0.0}, {Side::Right, 0, 0.0}}, g);
  EXPECT_LT(inf(w.orders[1] - w1), 1e-12);
  EXPECT_THROW(hpm_recursion(p, 0), ConfigError);
}

TEST(CheckEquivalence, Examples) {
  const auto lin = check_equivalence(find_case("linear-poisson").spec, 5);
  EXPECT_TRUE(lin.pass);
  EXPECT_LT(lin.max_rel_diff, 1e-12);
  EXPECT_EQ(lin.per_order_rel_diff.size(), 6u);
  EXPECT_TRUE(check_equivalence(find_case("riccati-tanh-short").spec, 10, 1e-10).pass);
  EXPECT_TRUE(check_equivalence(find_case("manufactured-quad").spec, 8).pass);
  const auto mut = check_equivalence(find_case("riccati-tanh-short").spec, 10, 1e-10, -1.01);
  EXPECT_FALSE(mut.pass);
  EXPECT_GT(mut.max_rel_diff, 1e-3);
  EXPECT_EQ(mut.hbar, -1.01);
  EXPECT_THROW(check_equivalence(find_case("linear-poisson").spec, 3, 0.0), ConfigError);
}

TEST(CheckEquivalence, AllBenchmarksUpToOrderTwelve) {
  for (const auto& c : builtin_cases()) {
    const auto r = check_equivalence(c.spec, 12);
    EXPECT_TRUE(r.pass) << c.id;
    EXPECT_EQ(r.per_order_rel_diff.size(), 13u);
    EXPECT_EQ(r.per_order_rel_diff[0], 0.0);
    EXPECT_EQ(r.pass, r.max_rel_diff < r.tolerance);
  }
}

TEST(CheckEquivalence, NonHomogeneousData) {
  ProblemSpec p = find_case("manufactured-quad").spec;
  p.bcs = {{Side::Left, 0, 0.5}, {Side::Right, 0, -0.2}};
  const auto r = check_equivalence(p, 10);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.per_order_rel_diff[0], 1e-13);
}

TEST(HpmDiverges, LongTanh) {
  const auto c = find_case("riccati-tanh-long");
  EXPECT_TRUE(hpm_recursion(c.spec, 15).divergence_warning);
}
