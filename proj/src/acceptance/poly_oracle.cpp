#include "hamsolve/poly_oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace hamsolve::oracle {

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_scale(const Poly& a, double s) {
  Poly out = a;
  for (double& c : out) c *= s;
  return out;
}

int u_degree(const PolyTree& t) {
  switch (t->kind) {
    case PolyNode::Kind::Const:
    case PolyNode::Kind::R:
      return 0;
    case PolyNode::Kind::U:
      return 1;
    case PolyNode::Kind::Add: {
      int d = 0;
      for (const auto& k : t->kids) d = std::max(d, u_degree(k));
      return d;
    }
    case PolyNode::Kind::Mul: {
      int d = 0;
      for (const auto& k : t->kids) d += u_degree(k);
      return d;
    }
    case PolyNode::Kind::Pow:
      return t->order * u_degree(t->kids[0]);
  }
  return 0;
}

std::string render(const PolyTree& t) {
  switch (t->kind) {
    case PolyNode::Kind::Const: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", t->value);
      return t->value < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
    }
    case PolyNode::Kind::R:
      return "r";
    case PolyNode::Kind::U:
      return "u" + std::string(static_cast<std::size_t>(t->order), '\'');
    case PolyNode::Kind::Add:
    case PolyNode::Kind::Mul: {
      const char* op = t->kind == PolyNode::Kind::Add ? " + " : "*";
      std::string s = "(";
      for (std::size_t i = 0; i < t->kids.size(); ++i) {
        if (i) s += op;
        s += render(t->kids[i]);
      }
      return s + ")";
    }
    case PolyNode::Kind::Pow:
      return "(" + render(t->kids[0]) + ")^" + std::to_string(t->order);
  }
  return {};
}

Poly expand(const PolyTree& t, double r, const std::vector<Poly>& u_series) {
  switch (t->kind) {
    case PolyNode::Kind::Const:
      return {t->value};
    case PolyNode::Kind::R:
      return {r};
    case PolyNode::Kind::U:
      return u_series.at(static_cast<std::size_t>(t->order));
    case PolyNode::Kind::Add: {
      Poly acc;
      for (const auto& k : t->kids) acc = poly_add(acc, expand(k, r, u_series));
      return acc;
    }
    case PolyNode::Kind::Mul: {
      Poly acc{1.0};
      for (const auto& k : t->kids) acc = poly_mul(acc, expand(k, r, u_series));
      return acc;
    }
    case PolyNode::Kind::Pow: {
      const Poly base = expand(t->kids[0], r, u_series);
      Poly acc{1.0};
      for (int i = 0; i < t->order; ++i) acc = poly_mul(acc, base);
      return acc;
    }
  }
  throw std::logic_error("bad oracle node");
}

namespace {

PolyTree leaf_const(double v) {
  auto n = std::make_shared<PolyNode>();
  n->kind = PolyNode::Kind::Const;
  n->value = v;
  return n;
}

PolyTree node(PolyNode::Kind kind, std::vector<PolyTree> kids, int order = 0) {
  auto n = std::make_shared<PolyNode>();
  n->kind = kind;
  n->order = order;
  n->kids = std::move(kids);
  return n;
}

// Tree with u-degree at most `budget`.
PolyTree grow(std::mt19937_64& rng, int budget, int max_order, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> coeff(-8, 8);
  std::uniform_int_distribution<int> ord(0, max_order);
  const int choice = depth >= 3 ? pick(rng) % 3 : pick(rng);
  if (budget == 0 || choice == 0) {
    if (pick(rng) < 3) return node(PolyNode::Kind::R, {});
    return leaf_const(coeff(rng) / 4.0);
  }
  if (choice <= 2) {
    auto n = std::make_shared<PolyNode>();
    n->kind = PolyNode::Kind::U;
    n->order = ord(rng);
    return n;
  }
  if (choice <= 5) {
    const int terms = 2 + pick(rng) % 2;
    std::vector<PolyTree> kids;
    for (int i = 0; i < terms; ++i) kids.push_back(grow(rng, budget, max_order, depth + 1));
    return node(PolyNode::Kind::Add, std::move(kids));
  }
  if (choice <= 7) {
    std::uniform_int_distribution<int> split(0, budget);
    const int left = split(rng);
    return node(PolyNode::Kind::Mul, {grow(rng, left, max_order, depth + 1),
                                      grow(rng, budget - left, max_order, depth + 1)});
  }
  std::uniform_int_distribution<int> ex(2, std::max(2, budget));
  const int e = ex(rng);
  if (e > budget) return grow(rng, budget, max_order, depth + 1);
  return node(PolyNode::Kind::Pow, {grow(rng, budget / e, max_order, depth + 1)}, e);
}

}  // namespace

PolyTree random_tree(std::mt19937_64& rng, int max_degree, int max_order) {
  while (true) {
    PolyTree t = grow(rng, max_degree, max_order, 0);
    const int d = u_degree(t);
    if (d >= 1 && d <= max_degree) return t;
  }
}

}  // namespace hamsolve::oracle
