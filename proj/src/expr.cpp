#include "hamsolve/expr.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hamsolve/errors.hpp"

namespace hamsolve {

std::string_view to_string(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Tanh: return "tanh";
    case UnaryFn::Sqrt: return "sqrt";
  }
  return "?";
}

Expr::Expr() : Expr(std::make_shared<const Node>()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {
  switch (node_->kind) {
    case Kind::U:
      max_order_ = node_->order;
      break;
    case Kind::IndepVar:
      uses_r_ = true;
      break;
    default:
      break;
  }
  for (const Expr& c : node_->children) {
    max_order_ = std::max(max_order_, c.max_order_);
    uses_r_ = uses_r_ || c.uses_r_;
  }
}

Expr Expr::constant(double value) {
  Node n;
  n.kind = Kind::Const;
  n.value = value;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::indep() {
  Node n;
  n.kind = Kind::IndepVar;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::u(int order) {
  if (order < 0 || order > kMaxDerivativeOrder) {
    throw ConfigError("derivative order " + std::to_string(order) + " outside [0, " +
                      std::to_string(kMaxDerivativeOrder) + "]");
  }
  Node n;
  n.kind = Kind::U;
  n.order = order;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(terms);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors.front();
  Node n;
  n.kind = Kind::Product;
  n.children = std::move(factors);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, double exponent) {
  if (!std::isfinite(exponent)) throw ConfigError("non-finite exponent");
  Node n;
  n.kind = Kind::Power;
  n.value = exponent;
  n.children.push_back(std::move(base));
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::unary(UnaryFn fn, Expr child) {
  Node n;
  n.kind = Kind::Unary;
  n.fn = fn;
  n.children.push_back(std::move(child));
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::order() const { return node_->order; }
double Expr::exponent() const { return node_->value; }
UnaryFn Expr::fn() const { return node_->fn; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_zero_constant() const { return kind() == Kind::Const && value() == 0.0; }

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void print(const Expr& e, std::ostream& os) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      if (e.value() < 0) {
        os << '(' << format_number(e.value()) << ')';
      } else {
        os << format_number(e.value());
      }
      return;
    case Expr::Kind::IndepVar:
      os << 'r';
      return;
    case Expr::Kind::U:
      os << 'u' << std::string(static_cast<std::size_t>(e.order()), '\'');
      return;
    case Expr::Kind::Sum:
    case Expr::Kind::Product: {
      const char* sep = e.kind() == Expr::Kind::Sum ? " + " : "*";
      os << '(';
      bool first = true;
      for (const Expr& c : e.children()) {
        if (!first) os << sep;
        first = false;
        print(c, os);
      }
      os << ')';
      return;
    }
    case Expr::Kind::Power:
      os << '(';
      print(e.children()[0], os);
      os << ")^(" << format_number(e.exponent()) << ')';
      return;
    case Expr::Kind::Unary:
      os << to_string(e.fn()) << '(';
      print(e.children()[0], os);
      os << ')';
      return;
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*this, os);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.kind() == Expr::Kind::Const) {
    if (b.value() == 0.0) throw DomainError("division by the constant zero");
    return Expr::product({a, Expr::constant(1.0 / b.value())});
  }
  return Expr::product({a, Expr::power(b, -1.0)});
}
Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Const) return Expr::constant(-a.value());
  return Expr::product({Expr::constant(-1.0), a});
}
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr pow(const Expr& base, double exponent) { return Expr::power(base, exponent); }
Expr apply(UnaryFn fn, const Expr& child) { return Expr::unary(fn, child); }

// ---------------------------------------------------------------------------
// Evaluation. One recursive walker serves both scalar and jet arithmetic.

namespace {

double power_of(double x, double exponent) {
  if (x < 0.0 && std::floor(exponent) != exponent) {
    throw DomainError("fractional power of negative value " + std::to_string(x));
  }
  if (x == 0.0 && exponent < 0.0) throw DomainError("negative power of zero");
  return std::pow(x, exponent);
}

Jet power_of(const Jet& x, double exponent) { return pow(x, exponent); }

double apply_fn(UnaryFn fn, double x) {
  switch (fn) {
    case UnaryFn::Sin: return std::sin(x);
    case UnaryFn::Cos: return std::cos(x);
    case UnaryFn::Exp: return std::exp(x);
    case UnaryFn::Tanh: return std::tanh(x);
    case UnaryFn::Log:
      if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
      return std::log(x);
    case UnaryFn::Sqrt:
      if (!(x > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(x));
      return std::sqrt(x);
  }
  throw std::logic_error("unknown unary function");
}

Jet apply_fn(UnaryFn fn, const Jet& x) {
  switch (fn) {
    case UnaryFn::Sin: return sin(x);
    case UnaryFn::Cos: return cos(x);
    case UnaryFn::Exp: return exp(x);
    case UnaryFn::Tanh: return tanh(x);
    case UnaryFn::Log: return log(x);
    case UnaryFn::Sqrt: return sqrt(x);
  }
  throw std::logic_error("unknown unary function");
}

// Leaves supplies constant(double), indep() and u(int) of type T.
template <class T, class Leaves>
T walk(const Expr& e, const Leaves& leaves) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return leaves.constant(e.value());
    case Expr::Kind::IndepVar:
      return leaves.indep();
    case Expr::Kind::U:
      return leaves.u(e.order());
    case Expr::Kind::Sum: {
      auto kids = e.children();
      T acc = walk<T>(kids[0], leaves);
      for (std::size_t i = 1; i < kids.size(); ++i) acc += walk<T>(kids[i], leaves);
      return acc;
    }
    case Expr::Kind::Product: {
      auto kids = e.children();
      T acc = walk<T>(kids[0], leaves);
      for (std::size_t i = 1; i < kids.size(); ++i) {
        // Constant factors scale instead of convolving.
        if (kids[i].kind() == Expr::Kind::Const) {
          acc = acc * kids[i].value();
        } else {
          acc = acc * walk<T>(kids[i], leaves);
        }
      }
      return acc;
    }
    case Expr::Kind::Power:
      return power_of(walk<T>(e.children()[0], leaves), e.exponent());
    case Expr::Kind::Unary:
      return apply_fn(e.fn(), walk<T>(e.children()[0], leaves));
  }
  throw std::logic_error("unknown expression node");
}

struct ScalarLeaves {
  const PointValues& v;
  double constant(double c) const { return c; }
  double indep() const { return v.r; }
  double u(int k) const { return v.u[static_cast<std::size_t>(k)]; }
};

struct JetLeaves {
  double r;
  std::span<const Jet> jets;
  std::size_t length;
  Jet constant(double c) const { return Jet::constant(c, length); }
  Jet indep() const { return Jet::constant(r, length); }
  Jet u(int k) const { return jets[static_cast<std::size_t>(k)]; }
};

}  // namespace

double eval_expr(const Expr& expr, const PointValues& values) {
  return walk<double>(expr, ScalarLeaves{values});
}

Jet jet_expand(const Expr& expr, double r, std::span<const Jet> u_jets) {
  const int need = expr.max_derivative_order();
  if (need >= static_cast<int>(u_jets.size())) {
    throw std::invalid_argument("jet_expand: no series supplied for u of derivative order " +
                                std::to_string(need));
  }
  std::size_t length = 0;
  for (int k = 0; k <= need; ++k) {
    const std::size_t len = u_jets[static_cast<std::size_t>(k)].size();
    if (k == 0) {
      length = len;
    } else if (len != length) {
      throw std::invalid_argument("jet_expand: series lengths differ");
    }
  }
  if (need < 0) length = u_jets.empty() ? 1 : u_jets[0].size();
  return walk<Jet>(expr, JetLeaves{r, u_jets, length});
}

}  // namespace hamsolve
