#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hamsolve/grid.hpp"
#include "hamsolve/problem.hpp"

namespace hamsolve {

/// A problem with a closed-form solution, used as ground truth.
struct BenchmarkCase {
  std::string id;
  ProblemSpec spec;
  Expr exact;
  std::string notes;
};

/// linear-poisson, riccati-tanh-short, riccati-tanh-long, manufactured-quad.
std::vector<BenchmarkCase> builtin_cases();

/// Throws ConfigError listing the known ids when `id` is unknown.
BenchmarkCase find_case(std::string_view id);

/// ||U - exact||_inf on the case's grid. Throws GridMismatchError when U
/// was computed on a different grid.
double error_vs_exact(const BenchmarkCase& bench, const Grid& grid, const GridFunction& U);
double error_vs_exact(const BenchmarkCase& bench, const GridFunction& U);

}  // namespace hamsolve
