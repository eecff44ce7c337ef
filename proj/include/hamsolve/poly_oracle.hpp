#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace hamsolve::oracle {

// Brute-force reference for jet expansion of polynomial expressions. Trees
// here are independent of Expr; they are rendered to text and parsed to
// get the Expr under test.

/// Dense polynomial in p, lowest coefficient first. Never truncated.
using Poly = std::vector<double>;

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double s);

struct PolyNode {
  enum class Kind { Const, R, U, Add, Mul, Pow };
  Kind kind = Kind::Const;
  double value = 0.0;  // Const
  int order = 0;       // U: derivative order; Pow: exponent
  std::vector<std::shared_ptr<const PolyNode>> kids;
};
using PolyTree = std::shared_ptr<const PolyNode>;

/// Polynomial degree of the tree in the u-variables.
int u_degree(const PolyTree& t);

/// Text accepted by parse_expr.
std::string render(const PolyTree& t);

/// Full expansion in p with r fixed and u^(k)(p) = sum_j u_series[k][j] p^j.
Poly expand(const PolyTree& t, double r, const std::vector<Poly>& u_series);

/// Random tree with u-degree in [1, max_degree], derivative orders up to
/// max_order, small integer-ish coefficients.
PolyTree random_tree(std::mt19937_64& rng, int max_degree, int max_order);

}  // namespace hamsolve::oracle
