#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamsolve/jet.hpp"

namespace hamsolve {

/// Highest derivative d^k u / dr^k an expression may reference.
inline constexpr int kMaxDerivativeOrder = 4;

enum class UnaryFn { Sin, Cos, Exp, Log, Tanh, Sqrt };

std::string_view to_string(UnaryFn fn);

/// Immutable expression tree over the unknown u, its derivatives and the
/// independent variable r. Nodes are shared, so copies are cheap and the
/// tree is safe to read from several threads.
class Expr {
 public:
  enum class Kind { Const, IndepVar, U, Sum, Product, Power, Unary };
  struct Node;

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr indep();
  /// d^order u / dr^order.
  static Expr u(int order = 0);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, double exponent);
  static Expr unary(UnaryFn fn, Expr child);

  Kind kind() const;
  double value() const;
  int order() const;
  double exponent() const;
  UnaryFn fn() const;
  std::span<const Expr> children() const;

  /// Largest k such that U(k) appears; -1 when the tree has no U node.
  int max_derivative_order() const { return max_order_; }
  bool depends_on_u() const { return max_order_ >= 0; }
  bool depends_on_r() const { return uses_r_; }
  bool is_zero_constant() const;

  std::string to_string() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
  int max_order_ = -1;
  bool uses_r_ = false;
};

struct Expr::Node {
  Kind kind = Kind::Const;
  double value = 0.0;     // Const value or Power exponent
  int order = 0;          // U derivative order
  UnaryFn fn = UnaryFn::Exp;
  std::vector<Expr> children;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr pow(const Expr& base, double exponent);
Expr apply(UnaryFn fn, const Expr& child);

/// Parse infix text such as "u' + u^2 - 1" or "-pi^2*sin(pi*r)".
///
/// Grammar: numbers, `r`, `pi`, `u`, `u'` .. `u''''`, the functions
/// sin cos exp log tanh sqrt, binary + - * /, unary -, and `^` whose
/// exponent must be a constant expression. Throws ParseError.
Expr parse_expr(std::string_view text);

/// Values of r and u, u', ..., u'''' at one point.
struct PointValues {
  double r = 0.0;
  std::array<double, kMaxDerivativeOrder + 1> u{};
};

/// Throws DomainError when log/sqrt (or a fractional power) receives an
/// argument outside its domain.
double eval_expr(const Expr& expr, const PointValues& values);

/// Taylor coefficients in p of expr evaluated on the series
/// u^(k)(p) = u_jets[k]. Coefficient m is the homotopy derivative D_m[expr].
/// `u_jets` is indexed by derivative order and must cover every U(k) in expr.
Jet jet_expand(const Expr& expr, double r, std::span<const Jet> u_jets);

}  // namespace hamsolve
