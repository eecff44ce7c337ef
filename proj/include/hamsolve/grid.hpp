#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hamsolve/expr.hpp"

namespace hamsolve {

using GridFunction = Eigen::VectorXd;

enum class GridKind { ChebyshevLobatto, UniformFd };

std::string_view to_string(GridKind kind);
GridKind parse_grid_kind(std::string_view text);

/// Collocation grid on [a, b] with dense differentiation matrices for
/// orders 1..4 and matching quadrature weights. Nodes increase from a to b.
class Grid {
 public:
  GridKind kind() const { return kind_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double a() const { return a_; }
  double b() const { return b_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  /// order 0 is the identity.
  const Eigen::MatrixXd& diff(int order) const;
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Samples of an expression in r only.
  GridFunction sample(const Expr& fn_of_r) const;
  /// Interpolates grid values at x: barycentric on Chebyshev grids,
  /// piecewise linear on uniform ones.
  double interpolate(const GridFunction& values, double x) const;

  bool same_as(const Grid& other) const;

 private:
  friend Grid build_grid(GridKind kind, int n, double a, double b);

  GridKind kind_ = GridKind::ChebyshevLobatto;
  double a_ = 0.0;
  double b_ = 1.0;
  Eigen::VectorXd nodes_;
  std::array<Eigen::MatrixXd, kMaxDerivativeOrder + 1> diff_;
  Eigen::VectorXd weights_;
};

/// Throws ConfigError when n < 8 or a >= b.
Grid build_grid(GridKind kind, int n, double a, double b);

/// u, u', ..., u^(max_order) sampled on the grid.
std::vector<GridFunction> derivative_table(const Grid& grid, const GridFunction& u, int max_order);

/// Evaluates an expression at every node given u on the grid.
GridFunction evaluate_on_grid(const Expr& expr, const Grid& grid, const GridFunction& u);

/// Quadrature-weighted sum: Clenshaw-Curtis on Chebyshev grids, trapezoid
/// on uniform ones.
double integrate(const GridFunction& values, const Grid& grid);

// ---------------------------------------------------------------------------

/// Linear differential operator sum_k c_k(r) d^k/dr^k with coefficient
/// functions of r alone.
class LinearOperator {
 public:
  LinearOperator() = default;
  /// coeffs[k] multiplies the k-th derivative. Throws ConfigError if any
  /// coefficient depends on u, or the order exceeds kMaxDerivativeOrder.
  explicit LinearOperator(std::vector<Expr> coeffs);

  /// d^k/dr^k.
  static LinearOperator derivative(int k);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Expr>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  /// The same operator as an expression in u and r.
  Expr as_expr() const;

 private:
  std::vector<Expr> coeffs_;
};

/// Dense collocation matrix of op on the grid. Throws SingularOperatorError
/// if the leading coefficient vanishes at a node.
Eigen::MatrixXd assemble_linear(const LinearOperator& op, const Grid& grid);

enum class Side { Left, Right };

struct BoundaryCondition {
  Side side = Side::Left;
  int derivative_order = 0;
  double value = 0.0;
};

/// Rows replaced by the boundary functionals, in the order of `bcs`: the
/// i-th left condition takes row i, the i-th right condition row n-1-i.
std::vector<int> bc_rows(const std::vector<BoundaryCondition>& bcs, int n);

/// The discrete functional u -> u^(k)(endpoint).
Eigen::RowVectorXd bc_functional(const BoundaryCondition& bc, const Grid& grid);

/// A collocation matrix with boundary rows replaced, factorized once.
/// Immutable after construction; `solve` may be called concurrently.
class BoundedSystem {
 public:
  /// Throws ConfigError when bcs are inconsistent with `order`, and
  /// SingularSystemError when the condition estimate exceeds 1e14.
  BoundedSystem(const Eigen::MatrixXd& A, std::vector<BoundaryCondition> bcs, const Grid& grid,
                int order);

  /// Solves with the stored BC values.
  GridFunction solve(const GridFunction& rhs) const;
  /// Solves with all BC values set to zero.
  GridFunction solve_homogeneous(const GridFunction& rhs) const;

  /// 1-norm condition estimate of the BC-modified matrix.
  double condition() const { return condition_; }
  const Eigen::MatrixXd& matrix() const { return modified_; }
  const std::vector<int>& rows() const { return rows_; }
  const std::vector<BoundaryCondition>& bcs() const { return bcs_; }

 private:
  GridFunction solve_with_values(const GridFunction& rhs, bool homogeneous) const;

  std::vector<BoundaryCondition> bcs_;
  std::vector<int> rows_;
  Eigen::MatrixXd modified_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 0.0;
};

inline constexpr double kMaxCondition = 1e14;

/// One-shot convenience around BoundedSystem. The operator order is taken
/// to be bcs.size().
GridFunction solve_with_bcs(const Eigen::MatrixXd& A, const GridFunction& rhs,
                            const std::vector<BoundaryCondition>& bcs, const Grid& grid);

}  // namespace hamsolve
