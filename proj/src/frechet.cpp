#include "hamsolve/frechet.hpp"

#include "hamsolve/errors.hpp"

namespace hamsolve {

GridFunction frechet_apply(const Expr& expr, const Grid& grid, const GridFunction& base,
                           const GridFunction& direction) {
  if (base.size() != grid.size() || direction.size() != grid.size()) {
    throw GridMismatchError("frechet_apply: grid function size mismatch");
  }
  const int top = std::max(expr.max_derivative_order(), 0);
  const auto ub = derivative_table(grid, base, top);
  const auto vb = derivative_table(grid, direction, top);
  GridFunction out(grid.size());
  std::vector<Jet> jets(static_cast<std::size_t>(top + 1));
  for (int i = 0; i < grid.size(); ++i) {
    for (int k = 0; k <= top; ++k) {
      jets[static_cast<std::size_t>(k)] = Jet{ub[static_cast<std::size_t>(k)](i), vb[static_cast<std::size_t>(k)](i)};
    }
    out(i) = jet_expand(expr, grid.nodes()(i), jets)[1];
  }
  return out;
}

std::vector<GridFunction> frechet_partials(const Expr& expr, const Grid& grid, const GridFunction& base) {
  const int top = expr.max_derivative_order();
  std::vector<GridFunction> partials;
  if (top < 0) return partials;
  const auto ub = derivative_table(grid, base, top);
  partials.assign(static_cast<std::size_t>(top + 1), GridFunction::Zero(grid.size()));
  std::vector<Jet> jets(static_cast<std::size_t>(top + 1));
  for (int i = 0; i < grid.size(); ++i) {
    for (int seed = 0; seed <= top; ++seed) {
      for (int k = 0; k <= top; ++k) {
        jets[static_cast<std::size_t>(k)] = Jet{ub[static_cast<std::size_t>(k)](i), k == seed ? 1.0 : 0.0};
      }
      partials[static_cast<std::size_t>(seed)](i) = jet_expand(expr, grid.nodes()(i), jets)[1];
    }
  }
  return partials;
}

Eigen::MatrixXd frechet_matrix(const Expr& expr, const Grid& grid, const GridFunction& base) {
  const auto partials = frechet_partials(expr, grid, base);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(grid.size(), grid.size());
  for (std::size_t k = 0; k < partials.size(); ++k) {
    J.noalias() += partials[k].asDiagonal() * grid.diff(static_cast<int>(k));
  }
  return J;
}

}  // namespace hamsolve
