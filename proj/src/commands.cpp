#include "hamsolve/commands.hpp"

#include <cstdlib>

#include "json.hpp"

#include "hamsolve/acceptance.hpp"
#include "hamsolve/benchmarks.hpp"
#include "hamsolve/continuation.hpp"
#include "hamsolve/convergence.hpp"
#include "hamsolve/errors.hpp"
#include "hamsolve/hpm.hpp"
#include "hamsolve/report.hpp"

namespace hamsolve::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

fs::path default_output_dir() {
  if (const char* env = std::getenv("HAMSOLVE_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

LoadedProblem resolve(const RunOptions& opts) {
  if (opts.problem.empty()) throw ConfigError("no problem given (--problem builtin:<id> or a file)");
  LoadedProblem p = load_problem(opts.problem);
  HamConfig& cfg = p.config;
  if (opts.grid_n) p.spec.grid.n = *opts.grid_n;
  if (opts.lopt) {
    const LoptMode mode = parse_lopt_mode(*opts.lopt);
    if (mode == LoptMode::User && !cfg.user_lopt()) {
      throw ConfigError("--lopt file needs lopt.c0 .. lopt.c4 in the problem file's [ham] section");
    }
    cfg = cfg.with_lopt(mode, mode == LoptMode::User ? cfg.user_lopt() : std::nullopt);
  }
  if (opts.hbar) cfg = cfg.with_hbar(*opts.hbar);
  if (opts.order) cfg = cfg.with_order(*opts.order);
  if (opts.aux) cfg = cfg.with_aux(parse_expr(*opts.aux));
  p.spec.validate();
  return p;
}

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

ordered_json report_json(const EquivalenceReport& r, const std::string& problem, int order) {
  ordered_json j;
  j["problem"] = problem;
  j["order"] = order;
  j["hbar"] = r.hbar;
  j["tolerance"] = r.tolerance;
  j["max_rel_diff"] = r.max_rel_diff;
  j["pass"] = r.pass;
  j["per_order_rel_diff"] = r.per_order_rel_diff;
  return j;
}

CsvTable series_table(const SeriesSolution& s) {
  CsvTable t({"order", "norm", "residual"});
  for (std::size_t m = 0; m < s.orders.size(); ++m) {
    t.add_row({std::to_string(m), format_real(s.per_order_norms[m]), format_real(s.residual_history[m])});
  }
  return t;
}

CsvTable path_table(const ContinuationPath& path, const Grid& grid) {
  const double probe = 0.5 * (grid.a() + grid.b());
  CsvTable t({"eps", "newton_iters", "jac_condition", "residual_inf", "u_at_probe"});
  for (const auto& s : path.steps) {
    t.add_row({format_real(s.eps), std::to_string(s.newton_iters), format_real(s.jac_condition),
               format_real(s.residual_inf), format_real(grid.interpolate(s.u, probe))});
  }
  return t;
}

CsvTable curve_table(const HbarCurve& curve) {
  CsvTable t({"hbar", "residual", "diverged", "probe"});
  for (const auto& e : curve.entries) {
    t.add_row({format_real(e.hbar), format_real(e.residual), yes_no(e.diverged), format_real(e.probe)});
  }
  return t;
}

}  // namespace

int cmd_solve(const RunOptions& opts, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedProblem p = resolve(opts);
    const HamSession session(p.spec, p.config);
    const SeriesSolution s = session.run();
    const GridFunction U = partial_sum(s, s.order());
    series_table(s).write(opts.out / "series.csv");

    const Grid& grid = session.grid();
    const bool has_exact = p.spec.exact.has_value();
    CsvTable sol(has_exact ? std::vector<std::string>{"r", "U", "exact", "error"}
                           : std::vector<std::string>{"r", "U"});
    const GridFunction exact = has_exact ? grid.sample(*p.spec.exact) : GridFunction();
    for (int i = 0; i < grid.size(); ++i) {
      std::vector<std::string> row{format_real(grid.nodes()(i)), format_real(U(i))};
      if (has_exact) {
        row.push_back(format_real(exact(i)));
        row.push_back(format_real(std::abs(U(i) - exact(i))));
      }
      sol.add_row(std::move(row));
    }
    sol.write(opts.out / "solution.csv");

    log << p.spec.name << ": M " << s.order() << " hbar " << format_real(p.config.hbar()) << " residual "
        << format_real(s.residual_history.back());
    if (has_exact) log << " error " << format_real((U - exact).lpNorm<Eigen::Infinity>());
    log << '\n';
    if (s.divergence_warning) {
      log << "warning: per-order norms are growing; the series looks divergent\n";
      return static_cast<int>(kExitDiverged);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_hscan(const RunOptions& opts, double from, double to, int points, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedProblem p = resolve(opts);
    const std::vector<double> grid = hbar_range(from, to, points);
    const HbarCurve curve = scan_hbar(p.spec, p.config, grid);
    curve_table(curve).write(opts.out / "hbar_curve.csv");
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.entries.size(); ++i) {
      if (curve.entries[i].residual < curve.entries[best].residual) best = i;
    }
    log << p.spec.name << ": " << curve.entries.size() << " points, smallest residual "
        << format_real(curve.entries[best].residual) << " at hbar " << format_real(curve.entries[best].hbar) << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_trace(const RunOptions& opts, int steps, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedProblem p = resolve(opts);
    const HamSession session(p.spec, p.config);
    try {
      const ContinuationPath path = trace_path(session, steps);
      path_table(path, session.grid()).write(opts.out / "path.csv");
      log << p.spec.name << ": " << path.steps.size() << " steps, final residual_inf "
          << format_real(path.last().residual_inf) << '\n';
      return static_cast<int>(path.reached_end() ? kExitOk : kExitError);
    } catch (const PathAbortError& e) {
      path_table(e.partial(), session.grid()).write(opts.out / "path.csv");
      err << "error: " << e.what() << '\n';
      return static_cast<int>(kExitPathAbort);
    }
  });
}

int cmd_hpm_check(const RunOptions& opts, double tolerance, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedProblem p = resolve(opts);
    const int order = opts.order.value_or(p.config.order());
    if (order < 1) throw ConfigError("hpm-check needs --order >= 1");
    const EquivalenceReport r = check_equivalence(p.spec, order, tolerance, opts.hbar);
    write_text_file(opts.out / "equivalence.json", report_json(r, p.spec.name, order).dump(2) + "\n");
    log << p.spec.name << ": max_rel_diff " << format_real(r.max_rel_diff) << (r.pass ? " pass" : " FAIL") << '\n';
    return static_cast<int>(r.pass ? kExitOk : kExitError);
  });
}

int cmd_bench(const fs::path& out, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    for (const auto& c : builtin_cases()) {
      const fs::path dir = out / c.id;
      const HamSession session(c.spec, default_config());
      const SeriesSolution s = session.run();
      series_table(s).write(dir / "series.csv");
      const EquivalenceReport eq = check_equivalence(c.spec, acceptance::kEquivalenceOrder);
      write_text_file(dir / "equivalence.json", report_json(eq, c.id, acceptance::kEquivalenceOrder).dump(2) + "\n");
      path_table(trace_path(session, acceptance::kPathSteps), session.grid()).write(dir / "path.csv");
    }
    {
      const auto c = find_case("riccati-tanh-long");
      const auto grid = hbar_range(acceptance::kBracketLo, acceptance::kBracketHi, 40);
      curve_table(scan_hbar(c.spec, default_config().with_order(acceptance::kControlOrder), grid))
          .write(out / c.id / "hbar_curve.csv");
    }

    const auto results = acceptance::run_numeric_criteria();
    std::string text;
    ordered_json j = ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
      all = all && r.pass;
      text += r.headline() + "\n";
      for (const auto& d : r.details) text += "  " + d + "\n";
      j.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"details", r.details}});
    }
    write_text_file(out / "acceptance.txt", text);
    write_text_file(out / "acceptance.json", j.dump(2) + "\n");
    log << text;
    return static_cast<int>(all ? kExitOk : kExitError);
  });
}

}  // namespace hamsolve::cli
