#include "hamsolve/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "hamsolve/benchmarks.hpp"
#include "hamsolve/continuation.hpp"
#include "hamsolve/convergence.hpp"
#include "hamsolve/hpm.hpp"
#include "hamsolve/jet.hpp"
#include "hamsolve/poly_oracle.hpp"
#include "hamsolve/report.hpp"

namespace hamsolve::acceptance {

namespace fs = std::filesystem;

std::string CriterionResult::headline() const {
  return "criterion " + std::to_string(id) + (pass ? " PASS " : " FAIL ") + title;
}

namespace {

std::string fmt(double v) { return format_real(v); }

// Thresholds print short.
std::string lim(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Rows of the discrete system that carry the equation rather than boundary data.
std::vector<int> interior_rows(const HamSession& session) {
  std::vector<bool> bc(static_cast<std::size_t>(session.grid().size()), false);
  for (int r : session.lopt_system().rows()) bc[static_cast<std::size_t>(r)] = true;
  std::vector<int> out;
  for (int i = 0; i < session.grid().size(); ++i) {
    if (!bc[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

double inf_norm_on(const GridFunction& v, const std::vector<int>& rows) {
  double m = 0.0;
  for (int i : rows) m = std::max(m, std::abs(v(i)));
  return m;
}

// Smooth random function: a few low Chebyshev modes mapped onto the grid.
GridFunction smooth_random(std::mt19937_64& rng, const Grid& grid, double amplitude) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::array<double, 6> c{};
  for (double& x : c) x = amplitude * coef(rng);
  GridFunction out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double t = 2.0 * (grid.nodes()(i) - grid.a()) / (grid.b() - grid.a()) - 1.0;
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * std::cos(static_cast<double>(k) * std::acos(t));
    out(i) = v;
  }
  return out;
}

}  // namespace

CriterionResult check_hpm_equivalence() {
  CriterionResult out{1, "hpm equivalence", true, {}};
  for (const auto& c : builtin_cases()) {
    const auto base = check_equivalence(c.spec, kEquivalenceOrder, kEquivalenceTolerance);
    const auto mutant = check_equivalence(c.spec, kEquivalenceOrder, kEquivalenceTolerance, kMutationHbar);
    const bool ok = base.pass && !mutant.pass && mutant.max_rel_diff > kMutationMinDiff;
    out.pass = out.pass && ok;
    out.details.push_back(c.id + ": max_rel_diff " + fmt(base.max_rel_diff) + " (< " + lim(kEquivalenceTolerance) +
                          "), at hbar " + lim(kMutationHbar) + " " + fmt(mutant.max_rel_diff) + " (> " +
                          lim(kMutationMinDiff) + ")");
  }
  return out;
}

CriterionResult check_endpoint_identities() {
  CriterionResult out{2, "homotopy endpoint identities", true, {}};
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const auto& c : builtin_cases()) {
    const HamSession session(c.spec, default_config());
    const double g0 = homotopy_residual(0.0, session.u0(), session).lpNorm<Eigen::Infinity>();
    const auto rows = interior_rows(session);
    double worst = 0.0;
    for (int k = 0; k < kEndpointSamples; ++k) {
      GridFunction w(session.grid().size());
      for (int i = 0; i < w.size(); ++i) w(i) = unit(rng);
      const GridFunction g1 = homotopy_residual(1.0, w, session);
      const GridFunction target =
          session.config().hbar() * session.aux_values().cwiseProduct(session.residual(w));
      const double scale = std::max(inf_norm_on(target, rows), std::numeric_limits<double>::min());
      worst = std::max(worst, inf_norm_on(g1 - target, rows) / scale);
    }
    const bool ok = g0 < kStartResidualMax && worst < kEndpointRelTolerance;
    out.pass = out.pass && ok;
    out.details.push_back(c.id + ": |G(0,u0)| " + fmt(g0) + " (< " + lim(kStartResidualMax) + "), G(1,w) rel " +
                          fmt(worst) + " (< " + lim(kEndpointRelTolerance) + ")");
  }
  return out;
}

CriterionResult check_continuation() {
  CriterionResult out{3, "continuation validity", true, {}};
  for (const auto& c : builtin_cases()) {
    const HamSession session(c.spec, default_config());
    std::string line = c.id + ": ";
    try {
      const ContinuationPath coarse = trace_path(session, kPathSteps);
      const ContinuationPath fine = trace_path(session, 2 * kPathSteps);
      const auto rows = interior_rows(session);
      const double f_end = inf_norm_on(session.residual(coarse.last().u), rows);
      double cond = 0.0;
      for (const auto* p : {&coarse, &fine}) {
        for (const auto& s : p->steps) cond = std::max(cond, s.jac_condition);
      }
      const double ratio = max_step_difference(coarse) / max_step_difference(fine);
      const bool ok = coarse.reached_end() && fine.reached_end() && f_end < kPathResidualMax &&
                      cond < kPathConditionMax && ratio >= kHalvingMinRatio;
      out.pass = out.pass && ok;
      line += "|F(u(1))| " + fmt(f_end) + " (< " + lim(kPathResidualMax) + "), max cond " + fmt(cond) + " (< " +
              lim(kPathConditionMax) + "), halving ratio " + fmt(ratio) + " (>= " + lim(kHalvingMinRatio) + ")";
    } catch (const PathAbortError& e) {
      out.pass = false;
      line += std::string("path aborted: ") + e.what();
    }
    out.details.push_back(line);
  }
  return out;
}

CriterionResult check_frechet_consistency() {
  CriterionResult out{4, "homotopy jacobian vs finite differences", true, {}};
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> eps_dist(0.0, 1.0);
  for (const auto& c : builtin_cases()) {
    const HamSession session(c.spec, default_config());
    double worst = 0.0;
    for (int k = 0; k < kFrechetSamples; ++k) {
      const double eps = eps_dist(rng);
      const GridFunction u = smooth_random(rng, session.grid(), 1.0);
      const GridFunction v = smooth_random(rng, session.grid(), 1.0);
      const GridFunction Jv = homotopy_jacobian(eps, u, session) * v;
      const double h = 1e-5 * (1.0 + u.lpNorm<Eigen::Infinity>()) / v.lpNorm<Eigen::Infinity>();
      const GridFunction fd =
          (homotopy_residual(eps, u + h * v, session) - homotopy_residual(eps, u - h * v, session)) / (2.0 * h);
      worst = std::max(worst, (Jv - fd).lpNorm<Eigen::Infinity>() / Jv.lpNorm<Eigen::Infinity>());
    }
    out.pass = out.pass && worst < kFrechetRelTolerance;
    out.details.push_back(c.id + ": max rel diff " + fmt(worst) + " (< " + lim(kFrechetRelTolerance) + ")");
  }
  return out;
}

CriterionResult check_convergence_control() {
  CriterionResult out{5, "convergence-control dominance", true, {}};
  {
    const auto c = find_case("riccati-tanh-long");
    const HamConfig base = default_config().with_order(kControlOrder);
    const SeriesSolution hpm = run_ham(c.spec, base);
    const OptimalHbar best = optimal_hbar(c.spec, base, kBracketLo, kBracketHi);
    const bool ok = hpm.divergence_warning && best.residual < kControlResidualMax;
    out.pass = out.pass && ok;
    out.details.push_back(c.id + ": M " + std::to_string(kControlOrder) + " hbar -1 diverged " +
                          (hpm.divergence_warning ? "true" : "false") + " residual " +
                          fmt(hpm.residual_history.back()) + ", hbar* " + fmt(best.hbar) + " residual* " +
                          fmt(best.residual) + " (< " + lim(kControlResidualMax) + ")");
  }
  {
    const auto c = find_case("riccati-tanh-short");
    const HamConfig base = default_config();
    const double at_minus_one = run_ham(c.spec, base).residual_history.back();
    const OptimalHbar best = optimal_hbar(c.spec, base, kBracketLo, kBracketHi);
    const bool ok = best.residual <= at_minus_one;
    out.pass = out.pass && ok;
    out.details.push_back(c.id + ": M " + std::to_string(base.order()) + " residual* " + fmt(best.residual) +
                          " at hbar* " + fmt(best.hbar) + " (<= residual(-1) " + fmt(at_minus_one) + ")");
  }
  return out;
}

CriterionResult check_exact_recovery() {
  CriterionResult out{6, "exact-solution recovery", true, {}};
  auto error_at = [](const BenchmarkCase& c, const HamConfig& cfg) {
    const SeriesSolution s = run_ham(c.spec, cfg);
    return error_vs_exact(c, partial_sum(s, s.order()));
  };
  {
    const auto c = find_case("riccati-tanh-short");
    const double e = error_at(c, default_config().with_order(kTanhOrder));
    out.pass = out.pass && e < kTanhErrorMax;
    out.details.push_back(c.id + ": M " + std::to_string(kTanhOrder) + " hbar -1 error " + fmt(e) + " (< " +
                          lim(kTanhErrorMax) + ")");
  }
  {
    const auto c = find_case("linear-poisson");
    const double e = error_at(c, default_config().with_order(1));
    out.pass = out.pass && e < kPoissonErrorMax;
    out.details.push_back(c.id + ": M 1 hbar -1 error " + fmt(e) + " (< " + lim(kPoissonErrorMax) + ")");
  }
  {
    const auto c = find_case("manufactured-quad");
    const double e = error_at(c, default_config().with_order(kManufacturedOrder).with_hbar(kManufacturedHbar));
    out.pass = out.pass && e < kManufacturedErrorMax;
    out.details.push_back(c.id + ": M " + std::to_string(kManufacturedOrder) + " hbar " + lim(kManufacturedHbar) +
                          " error " + fmt(e) + " (< " + lim(kManufacturedErrorMax) + ")");
  }
  return out;
}

CriterionResult check_jet_oracle() {
  CriterionResult out{7, "jet expansion vs polynomial oracle", true, {}};
  std::mt19937_64 rng(kSeed + 7);
  std::uniform_int_distribution<int> len_dist(1, kJetMaxLength);
  std::uniform_real_distribution<double> val(-1.5, 1.5);
  double worst = 0.0;
  int failures = 0;
  std::string first_failure;
  for (int k = 0; k < kJetCases; ++k) {
    const oracle::PolyTree tree = oracle::random_tree(rng, kJetMaxDegree, kMaxDerivativeOrder);
    const std::string text = oracle::render(tree);
    const std::size_t len = static_cast<std::size_t>(len_dist(rng));
    const double r = val(rng);
    std::vector<oracle::Poly> series;
    std::vector<Jet> jets;
    for (int d = 0; d <= kMaxDerivativeOrder; ++d) {
      oracle::Poly p(len);
      for (double& x : p) x = val(rng);
      series.push_back(p);
      jets.emplace_back(p);
    }
    oracle::Poly expected = oracle::expand(tree, r, series);
    expected.resize(len, 0.0);
    double diff = 0.0;
    double scale = 0.0;
    try {
      const Jet got = jet_expand(parse_expr(text), r, jets);
      for (std::size_t j = 0; j < len; ++j) {
        diff = std::max(diff, std::abs(got[j] - expected[j]));
        scale = std::max(scale, std::abs(expected[j]));
      }
    } catch (const std::exception& e) {
      diff = std::numeric_limits<double>::infinity();
      scale = 1.0;
      if (first_failure.empty()) first_failure = text + ": " + e.what();
    }
    const double rel = diff == 0.0 ? 0.0 : diff / scale;
    if (!(diff <= kJetRelTolerance * scale)) {
      ++failures;
      if (first_failure.empty()) first_failure = text + ": rel " + fmt(rel);
    }
    if (std::isfinite(rel)) worst = std::max(worst, rel);
  }
  out.pass = failures == 0;
  out.details.push_back(std::to_string(kJetCases) + " expressions, worst rel diff " + fmt(worst) + " (< " +
                        lim(kJetRelTolerance) + "), failures " + std::to_string(failures));
  if (!first_failure.empty()) out.details.push_back("first failure: " + first_failure);
  return out;
}

std::vector<CriterionResult> run_numeric_criteria() {
  return {check_hpm_equivalence(),     check_endpoint_identities(), check_continuation(),
          check_frechet_consistency(), check_convergence_control(), check_exact_recovery(),
          check_jet_oracle()};
}

namespace {

std::map<std::string, fs::path> list_files(const fs::path& root) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    out[fs::relative(e.path(), root).generic_string()] = e.path();
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

std::string compare_trees(const fs::path& a, const fs::path& b) {
  const auto fa = list_files(a);
  const auto fb = list_files(b);
  for (const auto& [rel, path] : fa) {
    const auto it = fb.find(rel);
    if (it == fb.end()) return "only in first tree: " + rel;
    if (fs::is_directory(path) != fs::is_directory(it->second)) return "file type differs: " + rel;
    if (!fs::is_directory(path) && slurp(path) != slurp(it->second)) return "content differs: " + rel;
  }
  for (const auto& [rel, path] : fb) {
    if (!fa.count(rel)) return "only in second tree: " + rel;
  }
  return {};
}

CriterionResult check_determinism(const std::function<void(const fs::path&)>& produce, const fs::path& scratch) {
  CriterionResult out{8, "bench determinism", false, {}};
  const fs::path first = scratch / "run1";
  const fs::path second = scratch / "run2";
  fs::remove_all(first);
  fs::remove_all(second);
  produce(first);
  produce(second);
  const std::string diff = compare_trees(first, second);
  const auto files = list_files(first).size();
  out.pass = diff.empty() && files > 0;
  out.details.push_back(std::to_string(files) + " entries compared" + (diff.empty() ? "" : ", " + diff));
  return out;
}

}  // namespace hamsolve::acceptance
