#pragma once

#include <optional>
#include <vector>

#include "hamsolve/ham.hpp"

namespace hamsolve {

/// L_opt = L, hbar = -1, H = 1 at truncation order M.
HamConfig hpm_config(const ProblemSpec& problem, int order = 10);

/// HPM recursion, obtained by expanding
///   L(w) - L(u_0) + p L(u_0) + p [N(w) - s] = 0
/// in powers of p:
///   L(w_0) = L(u_0)                        problem BCs
///   L(w_1) = s - L(u_0) - D_0[N]           homogeneous BCs
///   L(w_m) = -D_{m-1}[N],  m >= 2          homogeneous BCs
/// u_0 is the solution of L(u) = 0 under the problem BCs.
///
/// Deliberately independent of HamSession: only the grid, operator
/// assembly, BC solve and jet expansion are shared.
SeriesSolution hpm_recursion(const ProblemSpec& problem, int order);

struct EquivalenceReport {
  std::vector<double> per_order_rel_diff;
  double max_rel_diff = 0.0;
  bool pass = false;
  double tolerance = 1e-10;
  double hbar = -1.0;  // hbar used on the HAM side
};

/// Runs the HAM series under hpm_config (optionally with hbar overridden,
/// for mutation checks) and the HPM recursion, and compares order by order:
///   ||u_m - w_m||_inf / (1 + ||w_m||_inf).
EquivalenceReport check_equivalence(const ProblemSpec& problem, int order, double tolerance = 1e-10,
                                    std::optional<double> hbar_override = std::nullopt);

}  // namespace hamsolve
