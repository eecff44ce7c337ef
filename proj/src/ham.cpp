#include "hamsolve/ham.hpp"

#include <cmath>

#include "hamsolve/errors.hpp"

namespace hamsolve {

Grid make_grid(const GridParams& params) { return build_grid(params.kind, params.n, params.a, params.b); }

ResolvedLopt resolve_lopt(const ProblemSpec& problem, const HamConfig& config, const Grid& grid,
                          const GridFunction* u0) {
  switch (config.lopt_mode()) {
    case LoptMode::UseL:
      return {assemble_linear(problem.linear, grid), problem.linear.order()};
    case LoptMode::User:
      return {assemble_linear(*config.user_lopt(), grid), config.user_lopt()->order()};
    case LoptMode::FrechetAtU0: {
      if (u0 == nullptr) throw ConfigError("frechet lopt mode needs a reference u0");
      return {frechet_at_reference(problem, grid, *u0), frechet_order(problem)};
    }
  }
  throw std::logic_error("unknown lopt mode");
}

GridFunction solve_zeroth(const BoundedSystem& lopt_with_bcs) {
  return lopt_with_bcs.solve(GridFunction::Zero(lopt_with_bcs.matrix().rows()));
}

double squared_residual(const ProblemSpec& problem, const Grid& grid, const GridFunction& U) {
  const GridFunction F = evaluate_residual(problem, grid, U);
  return integrate(F.array().square().matrix(), grid) / (grid.b() - grid.a());
}

bool detect_divergence(std::span<const double> per_order_norms) {
  double running_max = 0.0;
  double last = -1.0;
  int rises = 0;
  for (std::size_t m = 1; m < per_order_norms.size(); ++m) {
    const double v = per_order_norms[m];
    if (!std::isfinite(v)) return true;
    running_max = std::max(running_max, v);
    // Terms that vanish by symmetry (odd/even series) carry only rounding.
    if (v <= 1e-8 * running_max) continue;
    if (last >= 0.0 && v > last) {
      if (++rises >= 3) return true;
    } else {
      rises = 0;
    }
    last = v;
  }
  return false;
}

namespace {

ProblemSpec validated(ProblemSpec p) {
  p.validate();
  return p;
}

ResolvedLopt session_lopt(const ProblemSpec& problem, const HamConfig& config, const Grid& grid) {
  if (static_cast<int>(problem.bcs.size()) < problem.linear.order()) {
    throw ConfigError(problem.name + ": L has order " + std::to_string(problem.linear.order()) + " but " +
                      std::to_string(problem.bcs.size()) + " boundary conditions were given");
  }
  if (config.lopt_mode() != LoptMode::FrechetAtU0) return resolve_lopt(problem, config, grid);
  // L_opt needs u_0 and u_0 needs L_opt: bootstrap u_0 from L.
  const ResolvedLopt base = resolve_lopt(problem, config.with_lopt(LoptMode::UseL), grid);
  const BoundedSystem sys(base.matrix, problem.bcs, grid, base.order);
  const GridFunction boot = solve_zeroth(sys);
  return resolve_lopt(problem, config, grid, &boot);
}

GridFunction checked_aux(const HamConfig& config, const Grid& grid) {
  GridFunction h = grid.sample(config.aux());
  for (int i = 0; i < h.size(); ++i) {
    if (h(i) == 0.0 || !std::isfinite(h(i))) {
      throw ConfigError("auxiliary function H vanishes at r = " + std::to_string(grid.nodes()(i)));
    }
  }
  return h;
}

}  // namespace

HamSession::HamSession(ProblemSpec problem, HamConfig config)
    : problem_(validated(std::move(problem))),
      config_(std::move(config)),
      grid_(make_grid(problem_.grid)),
      linear_(assemble_linear(problem_.linear, grid_)),
      lopt_(session_lopt(problem_, config_, grid_)),
      system_(lopt_.matrix, problem_.bcs, grid_, lopt_.order),
      u0_(solve_zeroth(system_)),
      aux_(checked_aux(config_, grid_)),
      source_(grid_.sample(problem_.source)) {}

GridFunction HamSession::residual(const GridFunction& U) const {
  return evaluate_residual(problem_, grid_, U);
}

double HamSession::squared_residual(const GridFunction& U) const {
  return hamsolve::squared_residual(problem_, grid_, U);
}

GridFunction HamSession::rhs_from_tables(int m, const std::vector<std::vector<GridFunction>>& tables,
                                         std::span<const GridFunction> orders) const {
  const std::size_t prev = static_cast<std::size_t>(m - 1);
  // D_{m-1}[F] = L u_{m-1} + D_{m-1}[N] - delta_{m,1} s
  GridFunction dF = linear_ * orders[prev];
  if (m == 1) dF -= source_;
  const Expr& N = problem_.nonlinear;
  if (N.depends_on_u()) {
    const int top = N.max_derivative_order();
    std::vector<Jet> jets(static_cast<std::size_t>(top + 1));
    std::vector<double> coeffs(static_cast<std::size_t>(m));
    for (int i = 0; i < grid_.size(); ++i) {
      for (int k = 0; k <= top; ++k) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
          coeffs[j] = tables[j][static_cast<std::size_t>(k)](i);
        }
        jets[static_cast<std::size_t>(k)] = Jet(coeffs);
      }
      dF(i) += jet_expand(N, grid_.nodes()(i), jets)[prev];
    }
  } else if (!N.is_zero_constant() && m == 1) {
    dF += grid_.sample(N);
  }
  GridFunction rhs = config_.hbar() * aux_.cwiseProduct(dF);
  if (m >= 2) rhs += lopt_.matrix * orders[prev];
  return rhs;
}

GridFunction HamSession::mth_order_rhs(int m, std::span<const GridFunction> orders) const {
  if (m < 1) throw RangeError("deformation order must be >= 1");
  if (static_cast<int>(orders.size()) < m) throw RangeError("mth_order_rhs needs u_0..u_{m-1}");
  const int top = std::max(problem_.nonlinear.max_derivative_order(), 0);
  std::vector<std::vector<GridFunction>> tables;
  for (int j = 0; j < m; ++j) tables.push_back(derivative_table(grid_, orders[static_cast<std::size_t>(j)], top));
  return rhs_from_tables(m, tables, orders);
}

SeriesSolution HamSession::run() const {
  SeriesSolution out{.orders = {}, .config = config_, .per_order_norms = {}, .residual_history = {}};
  const int M = config_.order();
  const int top = std::max(problem_.nonlinear.max_derivative_order(), 0);
  std::vector<std::vector<GridFunction>> tables;

  out.orders.push_back(u0_);
  tables.push_back(derivative_table(grid_, u0_, top));
  for (int m = 1; m <= M; ++m) {
    const GridFunction rhs = rhs_from_tables(m, tables, out.orders);
    out.orders.push_back(system_.solve_homogeneous(rhs));
    tables.push_back(derivative_table(grid_, out.orders.back(), top));
  }

  GridFunction U = GridFunction::Zero(grid_.size());
  for (const GridFunction& um : out.orders) {
    U += um;
    out.per_order_norms.push_back(um.lpNorm<Eigen::Infinity>());
    out.residual_history.push_back(squared_residual(U));
  }
  out.divergence_warning = detect_divergence(out.per_order_norms);

  const GridFunction linear_part = lopt_.matrix * (U - u0_);
  const GridFunction perturbation = config_.hbar() * aux_.cwiseProduct(residual(U)) - linear_part;
  const double denom = linear_part.lpNorm<Eigen::Infinity>();
  out.nonlinearity_ratio = denom > 0.0 ? perturbation.lpNorm<Eigen::Infinity>() / denom
                                       : std::numeric_limits<double>::infinity();
  return out;
}

SeriesSolution run_ham(const ProblemSpec& problem, const HamConfig& config) {
  return HamSession(problem, config).run();
}

GridFunction partial_sum(const SeriesSolution& series, int upto) {
  if (upto < 0 || upto > series.order()) {
    throw RangeError("partial sum order " + std::to_string(upto) + " outside [0, " +
                     std::to_string(series.order()) + "]");
  }
  GridFunction U = series.orders.front();
  for (int m = 1; m <= upto; ++m) U += series.orders[static_cast<std::size_t>(m)];
  return U;
}

}  // namespace hamsolve
