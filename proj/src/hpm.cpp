#include "hamsolve/hpm.hpp"

#include "hamsolve/errors.hpp"

namespace hamsolve {

HamConfig hpm_config(const ProblemSpec& /*problem*/, int order) {
  return HamConfig(LoptMode::UseL, -1.0, Expr::constant(1.0), order);
}

namespace {

// D_j[N] for j = 0..m-1 needs the series of every derivative of u at every node.
GridFunction nonlinear_coefficient(const Expr& N, const Grid& grid,
                                   const std::vector<std::vector<GridFunction>>& tables, int j) {
  GridFunction out = GridFunction::Zero(grid.size());
  if (!N.depends_on_u()) {
    if (j == 0 && !N.is_zero_constant()) out = grid.sample(N);
    return out;
  }
  const int top = N.max_derivative_order();
  const std::size_t len = static_cast<std::size_t>(j + 1);
  std::vector<Jet> jets(static_cast<std::size_t>(top + 1));
  for (int i = 0; i < grid.size(); ++i) {
    for (int k = 0; k <= top; ++k) {
      std::vector<double> c(len);
      for (std::size_t q = 0; q < len; ++q) c[q] = tables[q][static_cast<std::size_t>(k)](i);
      jets[static_cast<std::size_t>(k)] = Jet(std::move(c));
    }
    out(i) = jet_expand(N, grid.nodes()(i), jets)[len - 1];
  }
  return out;
}

}  // namespace

SeriesSolution hpm_recursion(const ProblemSpec& problem, int order) {
  if (order < 1) throw ConfigError("hpm_recursion needs order >= 1");
  problem.validate();
  const Grid grid = build_grid(problem.grid.kind, problem.grid.n, problem.grid.a, problem.grid.b);
  const Eigen::MatrixXd L = assemble_linear(problem.linear, grid);
  const BoundedSystem system(L, problem.bcs, grid, problem.linear.order());
  const int top = std::max(problem.nonlinear.max_derivative_order(), 0);

  const GridFunction u0 = system.solve(GridFunction::Zero(grid.size()));
  const GridFunction Lu0 = L * u0;

  SeriesSolution out{.orders = {}, .config = hpm_config(problem, order), .per_order_norms = {},
                     .residual_history = {}};
  std::vector<std::vector<GridFunction>> tables;
  out.orders.push_back(system.solve(Lu0));
  tables.push_back(derivative_table(grid, out.orders.back(), top));

  const GridFunction s = grid.sample(problem.source);
  for (int m = 1; m <= order; ++m) {
    GridFunction rhs = -nonlinear_coefficient(problem.nonlinear, grid, tables, m - 1);
    if (m == 1) rhs += s - Lu0;
    out.orders.push_back(system.solve_homogeneous(rhs));
    tables.push_back(derivative_table(grid, out.orders.back(), top));
  }

  GridFunction U = GridFunction::Zero(grid.size());
  for (const auto& w : out.orders) {
    U += w;
    out.per_order_norms.push_back(w.lpNorm<Eigen::Infinity>());
    out.residual_history.push_back(squared_residual(problem, grid, U));
  }
  out.divergence_warning = detect_divergence(out.per_order_norms);
  return out;
}

EquivalenceReport check_equivalence(const ProblemSpec& problem, int order, double tolerance,
                                    std::optional<double> hbar_override) {
  if (!(tolerance > 0.0)) throw ConfigError("equivalence tolerance must be positive");
  HamConfig cfg = hpm_config(problem, order);
  if (hbar_override) cfg = cfg.with_hbar(*hbar_override);
  const SeriesSolution ham = run_ham(problem, cfg);
  const SeriesSolution hpm = hpm_recursion(problem, order);

  EquivalenceReport report;
  report.tolerance = tolerance;
  report.hbar = cfg.hbar();
  for (std::size_t m = 0; m < hpm.orders.size(); ++m) {
    const double diff = (ham.orders[m] - hpm.orders[m]).lpNorm<Eigen::Infinity>();
    const double rel = diff / (1.0 + hpm.orders[m].lpNorm<Eigen::Infinity>());
    report.per_order_rel_diff.push_back(rel);
    report.max_rel_diff = std::max(report.max_rel_diff, rel);
  }
  report.pass = report.max_rel_diff < tolerance;
  return report;
}

}  // namespace hamsolve
