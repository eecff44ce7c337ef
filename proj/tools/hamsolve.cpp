#include <iostream>

#include "CLI11.hpp"
#include "hamsolve/commands.hpp"

using namespace hamsolve::cli;

namespace {

void add_common(CLI::App* cmd, RunOptions& opts, bool with_problem = true) {
  if (with_problem) {
    cmd->add_option("source", opts.problem, "builtin:<id> or a problem file");
    cmd->add_option("--problem", opts.problem, "builtin:<id> or a problem file");
  }
  cmd->add_option("--hbar", opts.hbar, "convergence-control parameter");
  cmd->add_option("--order", opts.order, "truncation order M");
  cmd->add_option("--grid-n", opts.grid_n, "number of grid nodes");
  cmd->add_option("--lopt", opts.lopt, "auxiliary linear operator: use-L, frechet or file");
  cmd->add_option("--H", opts.aux, "auxiliary function H(r)");
  cmd->add_option("--out", opts.out, "output directory (default $HAMSOLVE_OUT or .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homotopy analysis solver for nonlinear boundary value problems"};
  app.require_subcommand(1);

  RunOptions opts;
  opts.out = default_output_dir();

  auto* solve = app.add_subcommand("solve", "run the HAM series and write series.csv and solution.csv");
  add_common(solve, opts);

  double from = -2.0;
  double to = -0.1;
  int points = 20;
  auto* hscan = app.add_subcommand("hscan", "scan hbar and write hbar_curve.csv");
  add_common(hscan, opts);
  hscan->add_option("--from", from, "first hbar")->capture_default_str();
  hscan->add_option("--to", to, "last hbar")->capture_default_str();
  hscan->add_option("--points", points, "number of hbar values")->capture_default_str();

  int steps = 20;
  auto* trace = app.add_subcommand("trace", "follow the homotopy path in eps and write path.csv");
  add_common(trace, opts);
  trace->add_option("--steps", steps, "initial number of continuation steps")->capture_default_str();

  double tolerance = 1e-10;
  auto* hpm = app.add_subcommand("hpm-check", "compare the hbar = -1 series with the HPM recursion");
  add_common(hpm, opts);
  hpm->add_option("--tol", tolerance, "relative tolerance")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "run the acceptance suite on the builtin problems");
  bench->add_option("--out", opts.out, "output directory (default $HAMSOLVE_OUT or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kExitError);
  }

  if (*solve) return cmd_solve(opts, std::cout, std::cerr);
  if (*hscan) return cmd_hscan(opts, from, to, points, std::cout, std::cerr);
  if (*trace) return cmd_trace(opts, steps, std::cout, std::cerr);
  if (*hpm) return cmd_hpm_check(opts, tolerance, std::cout, std::cerr);
  return cmd_bench(opts.out, std::cout, std::cerr);
}
