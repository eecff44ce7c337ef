#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamsolve/expr.hpp"
#include "hamsolve/grid.hpp"

namespace hamsolve {

struct GridParams {
  GridKind kind = GridKind::ChebyshevLobatto;
  int n = 64;
  double a = 0.0;
  double b = 1.0;
};

/// F(u) = L(u) + N(u) - s(r) = 0 on [a, b] with explicit boundary data.
struct ProblemSpec {
  std::string name;
  GridParams grid;
  LinearOperator linear;
  Expr nonlinear;  // zero constant when the problem is linear
  Expr source;
  std::vector<BoundaryCondition> bcs;
  std::optional<Expr> exact;

  /// Structural checks: s and exact depend on r only, N references no
  /// derivative above the order of L. Throws ConfigError.
  void validate() const;

  bool is_linear() const { return !nonlinear.depends_on_u(); }
  /// F as a single expression tree.
  Expr residual_expr() const;
};

/// The complete residual F(U) at every node.
GridFunction evaluate_residual(const ProblemSpec& problem, const Grid& grid, const GridFunction& U);

/// Discretized Frechet derivative of F at u0: assemble(L) + DN(u0).
Eigen::MatrixXd frechet_at_reference(const ProblemSpec& problem, const Grid& grid, const GridFunction& u0);

/// Order of DF: max(order of L, highest derivative appearing in N).
int frechet_order(const ProblemSpec& problem);

enum class LoptMode { UseL, FrechetAtU0, User };

std::string_view to_string(LoptMode mode);
LoptMode parse_lopt_mode(std::string_view text);

/// The tunable parameters of the homotopy: auxiliary linear operator,
/// convergence-control parameter hbar, auxiliary function H(r), truncation
/// order M. Invariants are enforced on construction.
class HamConfig {
 public:
  /// Throws ConfigError if hbar == 0, H depends on u, M < 0, or mode is
  /// User without an operator.
  HamConfig(LoptMode mode, double hbar, Expr aux, int order,
            std::optional<LinearOperator> user_lopt = std::nullopt);

  LoptMode lopt_mode() const { return mode_; }
  double hbar() const { return hbar_; }
  const Expr& aux() const { return aux_; }
  int order() const { return order_; }
  const std::optional<LinearOperator>& user_lopt() const { return user_lopt_; }

  HamConfig with_hbar(double hbar) const;
  HamConfig with_order(int order) const;
  HamConfig with_aux(Expr aux) const;
  HamConfig with_lopt(LoptMode mode, std::optional<LinearOperator> user = std::nullopt) const;

 private:
  LoptMode mode_;
  double hbar_;
  Expr aux_;
  int order_;
  std::optional<LinearOperator> user_lopt_;
};

/// use-L, hbar = -1, H = 1, M = 10.
HamConfig default_config();

}  // namespace hamsolve
