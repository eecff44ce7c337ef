#include "hamsolve/problem.hpp"

#include <cmath>

#include "hamsolve/errors.hpp"
#include "hamsolve/frechet.hpp"

namespace hamsolve {

void ProblemSpec::validate() const {
  if (linear.empty()) throw ConfigError(name + ": missing linear operator L");
  if (source.depends_on_u()) throw ConfigError(name + ": source term s must depend on r only");
  if (exact && exact->depends_on_u()) throw ConfigError(name + ": exact solution must depend on r only");
  if (nonlinear.max_derivative_order() > linear.order()) {
    throw ConfigError(name + ": N references u^(" + std::to_string(nonlinear.max_derivative_order()) +
                      ") but L has order " + std::to_string(linear.order()));
  }
  if (grid.n < 8) throw ConfigError(name + ": grid needs at least 8 nodes");
  if (!(grid.a < grid.b)) throw ConfigError(name + ": domain needs a < b");
}

Expr ProblemSpec::residual_expr() const {
  std::vector<Expr> terms{linear.as_expr()};
  if (!nonlinear.is_zero_constant()) terms.push_back(nonlinear);
  if (!source.is_zero_constant()) terms.push_back(-source);
  return Expr::sum(std::move(terms));
}

GridFunction evaluate_residual(const ProblemSpec& problem, const Grid& grid, const GridFunction& U) {
  if (U.size() != grid.size()) throw GridMismatchError("residual: grid function size mismatch");
  GridFunction F = assemble_linear(problem.linear, grid) * U;
  if (!problem.nonlinear.is_zero_constant()) F += evaluate_on_grid(problem.nonlinear, grid, U);
  if (!problem.source.is_zero_constant()) F -= grid.sample(problem.source);
  return F;
}

Eigen::MatrixXd frechet_at_reference(const ProblemSpec& problem, const Grid& grid, const GridFunction& u0) {
  Eigen::MatrixXd J = assemble_linear(problem.linear, grid);
  if (problem.nonlinear.depends_on_u()) J += frechet_matrix(problem.nonlinear, grid, u0);
  return J;
}

int frechet_order(const ProblemSpec& problem) {
  return std::max(problem.linear.order(), problem.nonlinear.max_derivative_order());
}

std::string_view to_string(LoptMode mode) {
  switch (mode) {
    case LoptMode::UseL: return "use-L";
    case LoptMode::FrechetAtU0: return "frechet";
    case LoptMode::User: return "file";
  }
  return "?";
}

LoptMode parse_lopt_mode(std::string_view text) {
  if (text == "use-L" || text == "use-l" || text == "L") return LoptMode::UseL;
  if (text == "frechet" || text == "frechet-at-u0") return LoptMode::FrechetAtU0;
  if (text == "file" || text == "user") return LoptMode::User;
  throw ConfigError("unknown lopt mode '" + std::string(text) + "' (use-L, frechet, file)");
}

HamConfig::HamConfig(LoptMode mode, double hbar, Expr aux, int order,
                     std::optional<LinearOperator> user_lopt)
    : mode_(mode), hbar_(hbar), aux_(std::move(aux)), order_(order), user_lopt_(std::move(user_lopt)) {
  if (hbar_ == 0.0 || !std::isfinite(hbar_)) throw ConfigError("hbar must be a finite nonzero number");
  if (aux_.depends_on_u()) throw ConfigError("auxiliary function H must depend on r only");
  if (order_ < 0) throw ConfigError("truncation order must be non-negative");
  if (mode_ == LoptMode::User && !user_lopt_) {
    throw ConfigError("lopt mode 'file' requires a user linear operator");
  }
}

HamConfig HamConfig::with_hbar(double hbar) const {
  return HamConfig(mode_, hbar, aux_, order_, user_lopt_);
}

HamConfig HamConfig::with_order(int order) const {
  return HamConfig(mode_, hbar_, aux_, order, user_lopt_);
}

HamConfig HamConfig::with_aux(Expr aux) const {
  return HamConfig(mode_, hbar_, std::move(aux), order_, user_lopt_);
}

HamConfig HamConfig::with_lopt(LoptMode mode, std::optional<LinearOperator> user) const {
  return HamConfig(mode, hbar_, aux_, order_, user ? std::move(user) : user_lopt_);
}

HamConfig default_config() { return HamConfig(LoptMode::UseL, -1.0, Expr::constant(1.0), 10); }

}  // namespace hamsolve
