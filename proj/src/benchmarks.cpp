#include "hamsolve/benchmarks.hpp"

#include "hamsolve/errors.hpp"
#include "hamsolve/ham.hpp"

namespace hamsolve {

namespace {

ProblemSpec make_spec(std::string name, GridParams grid, LinearOperator L, std::string_view N,
                      std::string_view s, std::vector<BoundaryCondition> bcs, std::string_view exact) {
  ProblemSpec p;
  p.name = std::move(name);
  p.grid = grid;
  p.linear = std::move(L);
  p.nonlinear = parse_expr(N);
  p.source = parse_expr(s);
  p.bcs = std::move(bcs);
  p.exact = parse_expr(exact);
  return p;
}

BenchmarkCase make_case(ProblemSpec spec, std::string notes) {
  BenchmarkCase c{spec.name, spec, *spec.exact, std::move(notes)};
  return c;
}

}  // namespace

std::vector<BenchmarkCase> builtin_cases() {
  const auto cheb = [](double a, double b) { return GridParams{GridKind::ChebyshevLobatto, 64, a, b}; };
  const std::vector<BoundaryCondition> dirichlet{{Side::Left, 0, 0.0}, {Side::Right, 0, 0.0}};
  const std::vector<BoundaryCondition> origin{{Side::Left, 0, 0.0}};

  std::vector<BenchmarkCase> cases;
  cases.push_back(make_case(make_spec("linear-poisson", cheb(0.0, 1.0), LinearOperator::derivative(2), "0",
                                      "-pi^2*sin(pi*r)", dirichlet, "sin(pi*r)"),
                            "u'' = -pi^2 sin(pi r); sin(pi r) differentiated twice"));
  cases.push_back(make_case(make_spec("riccati-tanh-short", cheb(0.0, 1.0), LinearOperator::derivative(1), "u^2",
                                      "1", origin, "tanh(r)"),
                            "u' = 1 - u^2, u(0) = 0; tanh' = 1 - tanh^2"));
  cases.push_back(make_case(make_spec("riccati-tanh-long", cheb(0.0, 3.0), LinearOperator::derivative(1), "u^2",
                                      "1", origin, "tanh(r)"),
                            "as riccati-tanh-short on [0,3]; Taylor radius pi/2 < 3"));
  cases.push_back(make_case(make_spec("manufactured-quad", cheb(0.0, 1.0), LinearOperator::derivative(2), "u^2",
                                      "-pi^2*sin(pi*r) + sin(pi*r)^2", dirichlet, "sin(pi*r)"),
                            "s built from u = sin(pi r): u'' + u^2"));
  return cases;
}

BenchmarkCase find_case(std::string_view id) {
  std::string known;
  for (auto& c : builtin_cases()) {
    if (c.id == id) return c;
    known += (known.empty() ? "" : ", ") + c.id;
  }
  throw ConfigError("unknown builtin problem '" + std::string(id) + "' (known: " + known + ")");
}

double error_vs_exact(const BenchmarkCase& bench, const Grid& grid, const GridFunction& U) {
  const GridParams& p = bench.spec.grid;
  if (grid.kind() != p.kind || grid.size() != p.n || grid.a() != p.a || grid.b() != p.b) {
    throw GridMismatchError(bench.id + ": grid differs from the case's grid");
  }
  if (U.size() != grid.size()) throw GridMismatchError(bench.id + ": grid function size mismatch");
  return (U - grid.sample(bench.exact)).lpNorm<Eigen::Infinity>();
}

double error_vs_exact(const BenchmarkCase& bench, const GridFunction& U) {
  return error_vs_exact(bench, make_grid(bench.spec.grid), U);
}

}  // namespace hamsolve
