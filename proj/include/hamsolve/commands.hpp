#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "hamsolve/problem_file.hpp"

namespace hamsolve::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitDiverged = 2,
  kExitPathAbort = 3,
};

/// Flags shared by every command. Unset values keep what the problem
/// source declares (builtins use hbar -1, H = 1, M = 10, use-L).
struct RunOptions {
  std::string problem;
  std::optional<double> hbar;
  std::optional<int> order;
  std::optional<int> grid_n;
  std::optional<std::string> lopt;
  std::optional<std::string> aux;
  std::filesystem::path out = ".";
};

/// $HAMSOLVE_OUT if set, else the current directory.
std::filesystem::path default_output_dir();

/// Loads the problem and applies the overrides.
LoadedProblem resolve(const RunOptions& opts);

// Each command returns an ExitCode. Errors are reported on `err`.

/// series.csv: order,norm,residual. solution.csv: r,U[,exact,error].
int cmd_solve(const RunOptions& opts, std::ostream& log, std::ostream& err);

/// hbar_curve.csv: hbar,residual,diverged,probe.
int cmd_hscan(const RunOptions& opts, double from, double to, int points, std::ostream& log, std::ostream& err);

/// path.csv: eps,newton_iters,jac_condition,residual_inf,u_at_probe. The
/// probe is the domain midpoint. Exit 0 iff eps = 1 was reached.
int cmd_trace(const RunOptions& opts, int steps, std::ostream& log, std::ostream& err);

/// equivalence.json. Exit 0 iff pass.
int cmd_hpm_check(const RunOptions& opts, double tolerance, std::ostream& log, std::ostream& err);

/// Runs the numeric acceptance criteria and writes the report tree under
/// `out`. Exit 0 iff every criterion passed.
int cmd_bench(const std::filesystem::path& out, std::ostream& log, std::ostream& err);

}  // namespace hamsolve::cli
