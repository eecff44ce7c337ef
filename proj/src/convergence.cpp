#include "hamsolve/convergence.hpp"

#include <cmath>
#include <future>

#include "hamsolve/errors.hpp"

namespace hamsolve {

namespace {

HbarPoint evaluate_point(const ProblemSpec& problem, const HamConfig& base, double hbar, double probe_at) {
  HamSession session(problem, base.with_hbar(hbar));
  const SeriesSolution series = session.run();
  const GridFunction U = partial_sum(series, series.order());
  return HbarPoint{hbar, series.residual_history.back(), series.divergence_warning,
                   session.grid().interpolate(U, probe_at)};
}

// Non-finite residuals compare as +inf.
double comparable(double r) { return std::isfinite(r) ? r : std::numeric_limits<double>::infinity(); }

}  // namespace

HbarCurve scan_hbar(const ProblemSpec& problem, const HamConfig& base, std::span<const double> hbar_grid,
                    const ScanOptions& options) {
  for (std::size_t i = 0; i < hbar_grid.size(); ++i) {
    if (hbar_grid[i] == 0.0) throw ConfigError("hbar grid contains 0");
    if (i > 0 && !(hbar_grid[i] > hbar_grid[i - 1])) throw ConfigError("hbar grid must be strictly increasing");
  }
  const double probe_at = options.probe_at.value_or(0.5 * (problem.grid.a + problem.grid.b));

  HbarCurve curve;
  curve.entries.resize(hbar_grid.size());
  if (options.parallel && hbar_grid.size() > 1) {
    std::vector<std::future<HbarPoint>> jobs;
    jobs.reserve(hbar_grid.size());
    for (double h : hbar_grid) {
      jobs.push_back(std::async(std::launch::async, [&problem, &base, h, probe_at] {
        return evaluate_point(problem, base, h, probe_at);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) curve.entries[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < hbar_grid.size(); ++i) {
      curve.entries[i] = evaluate_point(problem, base, hbar_grid[i], probe_at);
    }
  }
  return curve;
}

std::vector<double> hbar_range(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("hbar range needs at least one point");
  if (points == 1) {
    if (lo == 0.0) throw ConfigError("hbar range [0, 0] is empty");
    return {lo};
  }
  if (!(lo < hi)) throw ConfigError("hbar range needs lo < hi");
  const double step = (hi - lo) / (points - 1);
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    double h = (i == points - 1) ? hi : lo + i * step;
    if (std::abs(h) < 1e-12 * std::max(std::abs(lo), std::abs(hi))) h = 0.5 * step;
    out[static_cast<std::size_t>(i)] = h;
  }
  return out;
}

namespace {

struct Tracker {
  const ProblemSpec& problem;
  const HamConfig& base;
  OptimalHbar best{0.0, std::numeric_limits<double>::infinity(), 0};

  double operator()(double h) {
    HamSession session(problem, base.with_hbar(h));
    const double r = comparable(session.run().residual_history.back());
    ++best.evaluations;
    if (r < best.residual || best.evaluations == 1) {
      best.hbar = h;
      best.residual = r;
    }
    return r;
  }
};

void search_half(Tracker& f, double lo, double hi) {
  const int n = kPrescanPoints;
  std::vector<double> xs(n);
  std::vector<double> rs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    rs[i] = f(xs[i]);
  }
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (rs[i] < rs[best]) best = i;
  }
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, n - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a >= kGoldenTolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
}

}  // namespace

OptimalHbar optimal_hbar(const ProblemSpec& problem, const HamConfig& base, double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("optimal_hbar: empty bracket");
  Tracker f{problem, base};
  const double gap = 1e-6 * (hi - lo);
  if (lo < 0.0 && hi > 0.0) {
    search_half(f, lo, -gap);
    search_half(f, gap, hi);
  } else {
    // Keep exact zero endpoints out of the admissible set.
    search_half(f, lo == 0.0 ? gap : lo, hi == 0.0 ? -gap : hi);
  }
  return f.best;
}

}  // namespace hamsolve
