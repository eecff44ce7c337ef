#pragma once

#include <vector>

#include "hamsolve/errors.hpp"
#include "hamsolve/ham.hpp"

namespace hamsolve {

// The homotopy operator traced here is
//
//   G(eps, u) = eps * hbar * H(r) * F(u) - (1 - eps) * L_opt(u - u_0),
//
// whose zero set is that of (1 - p) L_opt(u - u_0) = p hbar H F(u). Its
// Taylor expansion in p is the deformation recursion solved by
// HamSession, so hbar = -1, H = 1, L_opt = L is the HPM family.
// Boundary rows carry the boundary residual of u instead.

GridFunction homotopy_residual(double eps, const GridFunction& u, const HamSession& session);

/// Interior rows: eps hbar diag(H) DF(u) - (1 - eps) L_opt; boundary rows
/// are the boundary functionals.
Eigen::MatrixXd homotopy_jacobian(double eps, const GridFunction& u, const HamSession& session);

struct NewtonResult {
  GridFunction u;
  int iterations = 0;
  bool converged = false;
  double residual_inf = 0.0;
  double jac_condition = 0.0;  // 1-norm estimate at the returned u
};

inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kNewtonTolerance = 1e-10;

/// Newton on G(eps, .) = 0 from `warm_start`, with step halving (up to 8
/// times) whenever a full step increases ||G||_inf. Converged means
/// ||G||_inf < 1e-10 (1 + ||u||_inf). Never throws on non-convergence;
/// throws SingularSystemError only if a Jacobian cannot be factorized.
NewtonResult newton_at(double eps, const GridFunction& warm_start, const HamSession& session);

struct PathStep {
  double eps = 0.0;
  GridFunction u;
  int newton_iters = 0;
  double jac_condition = 0.0;
  double residual_inf = 0.0;
  bool converged = false;
};

struct ContinuationPath {
  std::vector<PathStep> steps;
  HamConfig config;

  const PathStep& last() const { return steps.back(); }
  bool reached_end() const { return !steps.empty() && steps.back().eps == 1.0 && steps.back().converged; }
};

inline constexpr double kMinPathStep = 1e-4;

/// Thrown when the continuation step underflows kMinPathStep.
class PathAbortError : public Error {
 public:
  PathAbortError(const std::string& what, ContinuationPath partial)
      : Error(what), partial_(std::move(partial)) {}
  const ContinuationPath& partial() const { return partial_; }

 private:
  ContinuationPath partial_;
};

/// Natural-parameter continuation in eps from (0, u_0) to eps = 1 with
/// uniform initial step 1/initial_steps. A failed corrector halves the
/// step; a success lets it grow back to the initial size.
ContinuationPath trace_path(const HamSession& session, int initial_steps);
ContinuationPath trace_path(const ProblemSpec& problem, const HamConfig& config, int initial_steps);

/// Largest ||u(eps_{k+1}) - u(eps_k)||_inf along a path.
double max_step_difference(const ContinuationPath& path);

}  // namespace hamsolve
