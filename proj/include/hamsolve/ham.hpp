#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hamsolve/grid.hpp"
#include "hamsolve/problem.hpp"

namespace hamsolve {

/// Per-order terms u_0..u_M of the series in the embedding parameter p,
/// plus diagnostics of every partial sum.
struct SeriesSolution {
  std::vector<GridFunction> orders;
  HamConfig config;
  std::vector<double> per_order_norms;     // ||u_m||_inf
  std::vector<double> residual_history;    // squared residual of U_0..U_M
  bool divergence_warning = false;
  /// ||hbar H F(U) - L_opt(U - u_0)|| / ||L_opt(U - u_0)|| at U = U_M.
  /// Reported only; no pass/fail meaning is attached.
  double nonlinearity_ratio = 0.0;

  int order() const { return static_cast<int>(orders.size()) - 1; }
};

/// Discretized auxiliary linear operator for one session.
struct ResolvedLopt {
  Eigen::MatrixXd matrix;
  int order = 0;
};

/// Builds L_opt for the configured mode. FrechetAtU0 needs `u0`; callers
/// bootstrap it with the use-L operator first.
ResolvedLopt resolve_lopt(const ProblemSpec& problem, const HamConfig& config, const Grid& grid,
                          const GridFunction* u0 = nullptr);

/// u_0 with L_opt(u_0) = 0 under the problem's boundary data.
GridFunction solve_zeroth(const BoundedSystem& lopt_with_bcs);

/// Mean squared residual (1/(b-a)) * integral of F(U)^2.
double squared_residual(const ProblemSpec& problem, const Grid& grid, const GridFunction& U);

/// Three consecutive increases of ||u_m||_inf over the non-negligible
/// terms (m >= 1), or any non-finite norm.
bool detect_divergence(std::span<const double> per_order_norms);

/// A solver session: grid, L_opt and its factorization, u_0 and H are
/// fixed at construction. All members are const afterwards, so one
/// session may be shared between threads.
class HamSession {
 public:
  /// Throws ConfigError on inconsistent BC counts or H vanishing at a
  /// node, SingularOperatorError / SingularSystemError from the L_opt solve.
  HamSession(ProblemSpec problem, HamConfig config);

  const ProblemSpec& problem() const { return problem_; }
  const HamConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  /// L_opt without boundary rows.
  const Eigen::MatrixXd& lopt() const { return lopt_.matrix; }
  int lopt_order() const { return lopt_.order; }
  const BoundedSystem& lopt_system() const { return system_; }
  const GridFunction& u0() const { return u0_; }
  const GridFunction& aux_values() const { return aux_; }

  GridFunction residual(const GridFunction& U) const;
  double squared_residual(const GridFunction& U) const;

  /// Right-hand side of the order-m deformation equation
  ///   L_opt(u_m - chi_m u_{m-1}) = hbar H D_{m-1}[F],
  /// i.e. hbar H D_{m-1}[F] + chi_m L_opt u_{m-1}. `orders` holds u_0..u_{m-1}.
  GridFunction mth_order_rhs(int m, std::span<const GridFunction> orders) const;

  SeriesSolution run() const;

 private:
  GridFunction rhs_from_tables(int m, const std::vector<std::vector<GridFunction>>& tables,
                               std::span<const GridFunction> orders) const;

  ProblemSpec problem_;
  HamConfig config_;
  Grid grid_;
  Eigen::MatrixXd linear_;
  ResolvedLopt lopt_;
  BoundedSystem system_;
  GridFunction u0_;
  GridFunction aux_;
  GridFunction source_;
};

SeriesSolution run_ham(const ProblemSpec& problem, const HamConfig& config);

/// u_0 + ... + u_upto. Throws RangeError when upto is outside [0, M].
GridFunction partial_sum(const SeriesSolution& series, int upto);

Grid make_grid(const GridParams& params);

}  // namespace hamsolve
