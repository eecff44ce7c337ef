#include "hamsolve/continuation.hpp"

#include <cmath>

namespace hamsolve {

namespace {

double tolerance_for(const GridFunction& u) {
  return kNewtonTolerance * (1.0 + u.lpNorm<Eigen::Infinity>());
}

double condition_of(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

}  // namespace

GridFunction homotopy_residual(double eps, const GridFunction& u, const HamSession& session) {
  const Grid& grid = session.grid();
  if (u.size() != grid.size()) throw GridMismatchError("homotopy_residual: size mismatch");
  const HamConfig& cfg = session.config();
  GridFunction G = eps * cfg.hbar() * session.aux_values().cwiseProduct(session.residual(u)) -
                   (1.0 - eps) * (session.lopt() * (u - session.u0()));
  const auto& bcs = session.problem().bcs;
  const auto& rows = session.lopt_system().rows();
  for (std::size_t i = 0; i < bcs.size(); ++i) {
    G(rows[i]) = bc_functional(bcs[i], grid).dot(u) - bcs[i].value;
  }
  return G;
}

Eigen::MatrixXd homotopy_jacobian(double eps, const GridFunction& u, const HamSession& session) {
  const Grid& grid = session.grid();
  if (u.size() != grid.size()) throw GridMismatchError("homotopy_jacobian: size mismatch");
  const Eigen::MatrixXd DF = frechet_at_reference(session.problem(), grid, u);
  Eigen::MatrixXd J = (eps * session.config().hbar()) * (session.aux_values().asDiagonal() * DF) -
                      (1.0 - eps) * session.lopt();
  const auto& bcs = session.problem().bcs;
  const auto& rows = session.lopt_system().rows();
  for (std::size_t i = 0; i < bcs.size(); ++i) J.row(rows[i]) = bc_functional(bcs[i], grid);
  return J;
}

NewtonResult newton_at(double eps, const GridFunction& warm_start, const HamSession& session) {
  NewtonResult out;
  out.u = warm_start;
  GridFunction G = homotopy_residual(eps, out.u, session);
  double gnorm = G.lpNorm<Eigen::Infinity>();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  while (true) {
    if (std::isfinite(gnorm) && gnorm < tolerance_for(out.u)) {
      out.converged = true;
      break;
    }
    if (out.iterations == kNewtonMaxIterations || !std::isfinite(gnorm)) break;
    lu.compute(homotopy_jacobian(eps, out.u, session));
    if (!(lu.rcond() > 0.0)) throw SingularSystemError("homotopy Jacobian is singular");
    const GridFunction delta = lu.solve(-G);
    if (!delta.allFinite()) throw SingularSystemError("homotopy Jacobian solve produced non-finite values");

    double step = 1.0;
    GridFunction trial = out.u + delta;
    GridFunction Gt = homotopy_residual(eps, trial, session);
    for (int h = 0; h < 8 && !(Gt.lpNorm<Eigen::Infinity>() <= gnorm); ++h) {
      step *= 0.5;
      trial = out.u + step * delta;
      Gt = homotopy_residual(eps, trial, session);
    }
    ++out.iterations;
    // A stalled line search at the rounding floor: keep the last iterate.
    if (!(Gt.lpNorm<Eigen::Infinity>() <= gnorm)) break;
    out.u = std::move(trial);
    G = std::move(Gt);
    gnorm = G.lpNorm<Eigen::Infinity>();
  }

  out.residual_inf = gnorm;
  lu.compute(homotopy_jacobian(eps, out.u, session));
  out.jac_condition = condition_of(lu);
  return out;
}

ContinuationPath trace_path(const HamSession& session, int initial_steps) {
  if (initial_steps < 2) throw ConfigError("trace_path needs at least 2 initial steps");
  ContinuationPath path{.steps = {}, .config = session.config()};

  PathStep start;
  start.eps = 0.0;
  start.u = session.u0();
  start.newton_iters = 0;
  start.residual_inf = homotopy_residual(0.0, start.u, session).lpNorm<Eigen::Infinity>();
  {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(homotopy_jacobian(0.0, start.u, session));
    start.jac_condition = condition_of(lu);
  }
  start.converged = start.residual_inf < tolerance_for(start.u);
  path.steps.push_back(start);

  const double h0 = 1.0 / initial_steps;
  double h = h0;
  double eps = 0.0;
  GridFunction u = session.u0();
  while (eps < 1.0) {
    double target = eps + h;
    if (target > 1.0 - 1e-12) target = 1.0;
    NewtonResult r = newton_at(target, u, session);
    if (r.converged) {
      path.steps.push_back(PathStep{target, r.u, r.iterations, r.jac_condition, r.residual_inf, true});
      eps = target;
      u = std::move(r.u);
      h = std::min(2.0 * h, h0);
    } else {
      h *= 0.5;
      if (h < kMinPathStep) {
        throw PathAbortError("continuation step underflow at eps = " + std::to_string(eps), path);
      }
    }
  }
  return path;
}

ContinuationPath trace_path(const ProblemSpec& problem, const HamConfig& config, int initial_steps) {
  return trace_path(HamSession(problem, config), initial_steps);
}

double max_step_difference(const ContinuationPath& path) {
  double worst = 0.0;
  for (std::size_t k = 1; k < path.steps.size(); ++k) {
    worst = std::max(worst, (path.steps[k].u - path.steps[k - 1].u).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace hamsolve
