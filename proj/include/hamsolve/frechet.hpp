#pragma once

#include <vector>

#include "hamsolve/expr.hpp"
#include "hamsolve/grid.hpp"

namespace hamsolve {

/// Directional derivative of expr at `base` along `direction`, pointwise on
/// the grid. Computed by forward-mode linearization: both functions are
/// lifted to two-term jets [u^(k), v^(k)] and coefficient 1 is returned.
GridFunction frechet_apply(const Expr& expr, const Grid& grid, const GridFunction& base,
                           const GridFunction& direction);

/// partials[k](i) = d expr / d u^(k) at node i, for k = 0..max order in expr.
std::vector<GridFunction> frechet_partials(const Expr& expr, const Grid& grid, const GridFunction& base);

/// Dense matrix J with J v = frechet_apply(expr, grid, base, v).
Eigen::MatrixXd frechet_matrix(const Expr& expr, const Grid& grid, const GridFunction& base);

}  // namespace hamsolve
