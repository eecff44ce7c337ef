#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hamsolve/ham.hpp"

namespace hamsolve {

struct HbarPoint {
  double hbar = 0.0;
  double residual = 0.0;  // squared residual of the M-th partial sum
  bool diverged = false;
  double probe = 0.0;     // partial sum at the probe location
};

struct HbarCurve {
  std::vector<HbarPoint> entries;
};

struct ScanOptions {
  /// Where the probe value is read; the domain midpoint when empty.
  std::optional<double> probe_at;
  /// Evaluate scan points on worker threads. Results are identical either way.
  bool parallel = true;
};

/// One HAM run per hbar at the base config's M, H and L_opt. Throws
/// ConfigError when a value is zero or the grid is not strictly monotone.
HbarCurve scan_hbar(const ProblemSpec& problem, const HamConfig& base, std::span<const double> hbar_grid,
                    const ScanOptions& options = {});

/// `points` values evenly spaced on [lo, hi]. A point that lands on zero is
/// moved half a spacing to the right so every value is admissible.
std::vector<double> hbar_range(double lo, double hi, int points);

struct OptimalHbar {
  double hbar = 0.0;
  double residual = 0.0;
  int evaluations = 0;
};

inline constexpr int kPrescanPoints = 17;
inline constexpr double kGoldenTolerance = 1e-3;

/// Minimizes the squared residual of the M-th partial sum over hbar in
/// [lo, hi]: a 17-point pre-scan picks the sub-bracket around the best
/// sample, then golden-section search narrows it below 1e-3. A bracket
/// containing 0 is split there and both halves are searched. The returned
/// residual is the smallest value seen at any probed point.
OptimalHbar optimal_hbar(const ProblemSpec& problem, const HamConfig& base, double lo, double hi);

}  // namespace hamsolve
