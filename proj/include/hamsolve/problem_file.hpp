#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hamsolve/problem.hpp"

namespace hamsolve {

/// A problem together with the solver settings it was declared with.
struct LoadedProblem {
  ProblemSpec spec;
  HamConfig config = default_config();
};

/// Parses the sectioned key = value format:
///
///   [domain]   a, b, grid (chebyshev | uniform), n
///   [operator] L.c0 .. L.c4, N, s
///   [bcs]      left.u = 0, right.u' = 1, ...
///   [ham]      lopt (use-L | frechet | file), lopt.c0 .. lopt.c4, hbar, H, M
///   [exact]    u
///
/// '#' starts a comment. Numeric values may be constant expressions (pi/2).
/// Errors are ParseError with the 1-based line number in the message and in
/// line(); `source_name` prefixes the message.
LoadedProblem parse_problem_text(std::string_view text, const std::string& source_name = "<input>");

/// Reads and parses a problem file. A missing file is a ConfigError naming it.
LoadedProblem load_problem_file(const std::filesystem::path& path);

/// "builtin:<id>" or a file path.
LoadedProblem load_problem(const std::string& source);

}  // namespace hamsolve
