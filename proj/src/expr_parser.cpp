#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "hamsolve/errors.hpp"
#include "hamsolve/expr.hpp"

namespace hamsolve {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(text_) + "', column " + std::to_string(pos_ + 1) +
                     ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    Expr ex = unary();
    if (ex.depends_on_u() || ex.depends_on_r()) {
      pos_ = at;
      fail("exponent must be a constant expression");
    }
    const double value = eval_expr(ex, PointValues{});
    if (base.kind() == Expr::Kind::Const) return Expr::constant(std::pow(base.value(), value));
    return pow(base, value);
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "u") {
      int order = 0;
      while (pos_ < text_.size() && text_[pos_] == '\'') {
        ++order;
        ++pos_;
      }
      if (order > kMaxDerivativeOrder) {
        fail("derivative order " + std::to_string(order) + " exceeds the maximum of " +
             std::to_string(kMaxDerivativeOrder));
      }
      return Expr::u(order);
    }
    if (name == "r") return Expr::indep();
    if (name == "pi") return Expr::constant(std::numbers::pi);
    static constexpr UnaryFn kFns[] = {UnaryFn::Sin, UnaryFn::Cos,  UnaryFn::Exp,
                                       UnaryFn::Log, UnaryFn::Tanh, UnaryFn::Sqrt};
    for (UnaryFn fn : kFns) {
      if (name == to_string(fn)) {
        expect('(');
        Expr arg = expression();
        expect(')');
        if (!arg.depends_on_u() && !arg.depends_on_r()) {
          return Expr::constant(eval_expr(apply(fn, arg), PointValues{}));
        }
        return apply(fn, arg);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) {
  try {
    return Parser(text).parse();
  } catch (const DomainError& e) {
    throw ParseError("expression '" + std::string(text) + "': " + e.what());
  }
}

}  // namespace hamsolve
