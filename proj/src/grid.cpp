#include "hamsolve/grid.hpp"

#include <cmath>
#include <numbers>

#include "hamsolve/errors.hpp"

namespace hamsolve {

std::string_view to_string(GridKind kind) {
  return kind == GridKind::ChebyshevLobatto ? "chebyshev-lobatto" : "uniform-fd";
}

GridKind parse_grid_kind(std::string_view text) {
  if (text == "chebyshev-lobatto" || text == "chebyshev") return GridKind::ChebyshevLobatto;
  if (text == "uniform-fd" || text == "uniform") return GridKind::UniformFd;
  throw ConfigError("unknown grid kind '" + std::string(text) + "'");
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Differentiation matrices of orders 1..max_order on ascending
// Chebyshev-Lobatto points of [-1, 1], by the Schneider-Werner recursion
//   D(k)_ij = k / (x_i - x_j) * (w_j / w_i * D(k-1)_ii - D(k-1)_ij).
// Differences use the sine identity and each diagonal is the negative row
// sum, so every D(k) annihilates constants to rounding. Powers of D(1)
// lose several digits per order at n = 64; this recursion does not.
std::vector<MatrixXd> chebyshev_diff(int n, int max_order) {
  const int N = n - 1;
  const double pi = std::numbers::pi;
  MatrixXd dx(n, n);
  MatrixXd wratio(n, n);
  auto c = [N](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // x_j = -cos(j pi / N); -cos(a) + cos(b) = 2 sin((a+b)/2) sin((a-b)/2)
      dx(i, j) = 2.0 * std::sin((i + j) * pi / (2.0 * N)) * std::sin((i - j) * pi / (2.0 * N));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      wratio(i, j) = sign * c(i) / c(j);
    }
  }
  std::vector<MatrixXd> out;
  MatrixXd prev = MatrixXd::Identity(n, n);
  for (int k = 1; k <= max_order; ++k) {
    MatrixXd D = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        D(i, j) = k * (wratio(i, j) * prev(i, i) - prev(i, j)) / dx(i, j);
        row_sum += D(i, j);
      }
      D(i, i) = -row_sum;
    }
    out.push_back(D);
    prev = std::move(D);
  }
  return out;
}

VectorXd clenshaw_curtis(int n) {
  const int N = n - 1;
  const double pi = std::numbers::pi;
  VectorXd w = VectorXd::Zero(n);
  VectorXd v = VectorXd::Ones(n);
  if (N % 2 == 0) {
    w(0) = w(N) = 1.0 / (N * N - 1.0);
    for (int j = 1; j < N; ++j) {
      const double theta = pi * j / N;
      for (int k = 1; k < N / 2; ++k) v(j) -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      v(j) -= std::cos(N * theta) / (N * N - 1.0);
    }
  } else {
    w(0) = w(N) = 1.0 / (static_cast<double>(N) * N);
    for (int j = 1; j < N; ++j) {
      const double theta = pi * j / N;
      for (int k = 1; k <= (N - 1) / 2; ++k) {
        v(j) -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      }
    }
  }
  for (int j = 1; j < N; ++j) w(j) = 2.0 * v(j) / N;
  return w;
}

// Fornberg's algorithm: weights[k][j] for the k-th derivative at z from
// the values at x[0..s-1].
std::vector<std::vector<double>> fornberg(double z, const std::vector<double>& x, int max_k) {
  const int s = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_k + 1),
                                     std::vector<double>(static_cast<std::size_t>(s), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < s; ++i) {
    const int mn = std::min(i, max_k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Second-order (or better) finite-difference matrix for derivative k.
MatrixXd finite_difference(const VectorXd& nodes, int k) {
  const int n = static_cast<int>(nodes.size());
  const int width = (k % 2 == 1) ? k + 2 : k + 3;
  MatrixXd D = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int start = i - width / 2;
    start = std::clamp(start, 0, n - width);
    std::vector<double> x(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j) x[static_cast<std::size_t>(j)] = nodes(start + j);
    const auto w = fornberg(nodes(i), x, k);
    for (int j = 0; j < width; ++j) D(i, start + j) = w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
  }
  return D;
}

}  // namespace

Grid build_grid(GridKind kind, int n, double a, double b) {
  if (n < 8) throw ConfigError("grid needs at least 8 nodes, got " + std::to_string(n));
  if (!(a < b)) throw ConfigError("grid interval needs a < b");
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("grid interval must be finite");

  Grid g;
  g.kind_ = kind;
  g.a_ = a;
  g.b_ = b;
  g.nodes_.resize(n);
  const double half = 0.5 * (b - a);
  g.diff_[0] = MatrixXd::Identity(n, n);

  if (kind == GridKind::ChebyshevLobatto) {
    const int N = n - 1;
    for (int j = 0; j < n; ++j) {
      // sin form is symmetric about the midpoint to rounding
      const double x = -std::sin(std::numbers::pi * (N - 2.0 * j) / (2.0 * N));
      g.nodes_(j) = a + (x + 1.0) * half;
    }
    g.nodes_(0) = a;
    g.nodes_(N) = b;
    const auto D = chebyshev_diff(n, kMaxDerivativeOrder);
    double scale = 1.0;
    for (int k = 1; k <= kMaxDerivativeOrder; ++k) {
      scale /= half;
      g.diff_[k] = D[static_cast<std::size_t>(k - 1)] * scale;
    }
    g.weights_ = clenshaw_curtis(n) * half;
  } else {
    const double h = (b - a) / (n - 1);
    for (int j = 0; j < n; ++j) g.nodes_(j) = a + j * h;
    g.nodes_(n - 1) = b;
    for (int k = 1; k <= kMaxDerivativeOrder; ++k) g.diff_[k] = finite_difference(g.nodes_, k);
    g.weights_ = VectorXd::Constant(n, h);
    g.weights_(0) = g.weights_(n - 1) = 0.5 * h;
  }
  return g;
}

const Eigen::MatrixXd& Grid::diff(int order) const {
  if (order < 0 || order > kMaxDerivativeOrder) {
    throw RangeError("differentiation order " + std::to_string(order) + " not available");
  }
  return diff_[static_cast<std::size_t>(order)];
}

GridFunction Grid::sample(const Expr& fn_of_r) const {
  if (fn_of_r.depends_on_u()) throw ConfigError("sample: expression depends on u");
  GridFunction out(size());
  PointValues pv;
  for (int i = 0; i < size(); ++i) {
    pv.r = nodes_(i);
    out(i) = eval_expr(fn_of_r, pv);
  }
  return out;
}

double Grid::interpolate(const GridFunction& values, double x) const {
  if (values.size() != size()) throw GridMismatchError("interpolate: size mismatch");
  const int n = size();
  if (kind_ == GridKind::UniformFd) {
    if (x <= a_) return values(0);
    if (x >= b_) return values(n - 1);
    const double h = (b_ - a_) / (n - 1);
    const int j = std::min(static_cast<int>((x - a_) / h), n - 2);
    const double t = (x - nodes_(j)) / (nodes_(j + 1) - nodes_(j));
    return (1.0 - t) * values(j) + t * values(j + 1);
  }
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dx = x - nodes_(j);
    if (dx == 0.0) return values(j);
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n - 1) w *= 0.5;
    num += w * values(j) / dx;
    den += w / dx;
  }
  return num / den;
}

bool Grid::same_as(const Grid& other) const {
  return kind_ == other.kind_ && size() == other.size() && a_ == other.a_ && b_ == other.b_;
}

std::vector<GridFunction> derivative_table(const Grid& grid, const GridFunction& u, int max_order) {
  if (u.size() != grid.size()) throw GridMismatchError("grid function size does not match grid");
  std::vector<GridFunction> table;
  table.reserve(static_cast<std::size_t>(std::max(max_order, 0) + 1));
  table.push_back(u);
  for (int k = 1; k <= max_order; ++k) table.push_back(grid.diff(k) * u);
  return table;
}

GridFunction evaluate_on_grid(const Expr& expr, const Grid& grid, const GridFunction& u) {
  const auto table = derivative_table(grid, u, std::max(expr.max_derivative_order(), 0));
  GridFunction out(grid.size());
  PointValues pv;
  for (int i = 0; i < grid.size(); ++i) {
    pv.r = grid.nodes()(i);
    for (std::size_t k = 0; k < table.size(); ++k) pv.u[k] = table[k](i);
    out(i) = eval_expr(expr, pv);
  }
  return out;
}

double integrate(const GridFunction& values, const Grid& grid) {
  if (values.size() != grid.size()) throw GridMismatchError("integrate: size mismatch");
  return grid.weights().dot(values);
}

// ---------------------------------------------------------------------------

LinearOperator::LinearOperator(std::vector<Expr> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ConfigError("linear operator needs at least one coefficient");
  if (order() > kMaxDerivativeOrder) {
    throw ConfigError("linear operator order " + std::to_string(order()) + " exceeds " +
                      std::to_string(kMaxDerivativeOrder));
  }
  for (const Expr& c : coeffs_) {
    if (c.depends_on_u()) throw ConfigError("linear operator coefficient depends on u");
  }
}

LinearOperator LinearOperator::derivative(int k) {
  std::vector<Expr> c(static_cast<std::size_t>(k + 1), Expr::constant(0.0));
  c.back() = Expr::constant(1.0);
  return LinearOperator(std::move(c));
}

Expr LinearOperator::as_expr() const {
  std::vector<Expr> terms;
  for (int k = 0; k <= order(); ++k) {
    const Expr& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero_constant()) continue;
    terms.push_back(c * Expr::u(k));
  }
  return Expr::sum(std::move(terms));
}

Eigen::MatrixXd assemble_linear(const LinearOperator& op, const Grid& grid) {
  if (op.empty()) throw ConfigError("empty linear operator");
  const int n = grid.size();
  MatrixXd A = MatrixXd::Zero(n, n);
  for (int k = 0; k <= op.order(); ++k) {
    const Expr& c = op.coeffs()[static_cast<std::size_t>(k)];
    if (c.is_zero_constant()) continue;
    const GridFunction cv = grid.sample(c);
    if (k == op.order()) {
      for (int i = 0; i < n; ++i) {
        if (cv(i) == 0.0 || !std::isfinite(cv(i))) {
          throw SingularOperatorError("leading coefficient vanishes at r = " +
                                      std::to_string(grid.nodes()(i)));
        }
      }
    }
    A.noalias() += cv.asDiagonal() * grid.diff(k);
  }
  if (op.coeffs().back().is_zero_constant()) {
    throw SingularOperatorError("leading coefficient is identically zero");
  }
  return A;
}

std::vector<int> bc_rows(const std::vector<BoundaryCondition>& bcs, int n) {
  std::vector<int> rows;
  int left = 0;
  int right = 0;
  for (const auto& bc : bcs) {
    rows.push_back(bc.side == Side::Left ? left++ : n - 1 - right++);
  }
  if (left + right > n) throw ConfigError("more boundary conditions than grid nodes");
  return rows;
}

Eigen::RowVectorXd bc_functional(const BoundaryCondition& bc, const Grid& grid) {
  const int idx = bc.side == Side::Left ? 0 : grid.size() - 1;
  return grid.diff(bc.derivative_order).row(idx);
}

BoundedSystem::BoundedSystem(const Eigen::MatrixXd& A, std::vector<BoundaryCondition> bcs,
                             const Grid& grid, int order)
    : bcs_(std::move(bcs)) {
  const int n = grid.size();
  if (A.rows() != n || A.cols() != n) throw GridMismatchError("matrix does not match grid");
  if (static_cast<int>(bcs_.size()) != order) {
    throw ConfigError("operator of order " + std::to_string(order) + " needs " +
                      std::to_string(order) + " boundary conditions, got " +
                      std::to_string(bcs_.size()));
  }
  for (const auto& bc : bcs_) {
    if (bc.derivative_order < 0 || bc.derivative_order >= order) {
      throw ConfigError("boundary condition on derivative " + std::to_string(bc.derivative_order) +
                        " is not below the operator order " + std::to_string(order));
    }
  }
  rows_ = bc_rows(bcs_, n);
  modified_ = A;
  for (std::size_t i = 0; i < bcs_.size(); ++i) modified_.row(rows_[i]) = bc_functional(bcs_[i], grid);
  lu_.compute(modified_);
  const double rcond = lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!std::isfinite(condition_) || condition_ > kMaxCondition) {
    throw SingularSystemError("boundary-value system is numerically singular (condition estimate " +
                              std::to_string(condition_) + ")");
  }
}

GridFunction BoundedSystem::solve_with_values(const GridFunction& rhs, bool homogeneous) const {
  if (rhs.size() != modified_.rows()) throw GridMismatchError("right-hand side size mismatch");
  GridFunction b = rhs;
  for (std::size_t i = 0; i < bcs_.size(); ++i) b(rows_[i]) = homogeneous ? 0.0 : bcs_[i].value;
  return lu_.solve(b);
}

GridFunction BoundedSystem::solve(const GridFunction& rhs) const { return solve_with_values(rhs, false); }

GridFunction BoundedSystem::solve_homogeneous(const GridFunction& rhs) const {
  return solve_with_values(rhs, true);
}

GridFunction solve_with_bcs(const Eigen::MatrixXd& A, const GridFunction& rhs,
                            const std::vector<BoundaryCondition>& bcs, const Grid& grid) {
  return BoundedSystem(A, bcs, grid, static_cast<int>(bcs.size())).solve(rhs);
}

}  // namespace hamsolve
