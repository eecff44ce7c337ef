#include "hamsolve/jet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hamsolve/errors.hpp"

namespace hamsolve {

namespace {

void require_same_length(const Jet& a, const Jet& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("jet length mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

// x^n for a non-negative integer n by binary powering.
Jet integer_power(const Jet& x, long long n) {
  Jet result = Jet::constant(1.0, x.size());
  Jet base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace

Jet::Jet(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

Jet::Jet(std::initializer_list<double> coeffs) : c_(coeffs) {}

Jet Jet::constant(double value, std::size_t length) {
  std::vector<double> c(length, 0.0);
  if (length > 0) c[0] = value;
  return Jet(std::move(c));
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_length(*this, rhs);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_length(*this, rhs);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  require_same_length(lhs, rhs);
  const std::size_t n = lhs.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= m; ++k) acc += lhs.c_[k] * rhs.c_[m - k];
    out[m] = acc;
  }
  return Jet(std::move(out));
}

Jet pow(const Jet& x, double exponent) {
  const std::size_t n = x.size();
  if (n == 0) return x;
  if (exponent == 0.0) return Jet::constant(1.0, n);
  if (is_integer(exponent) && exponent > 0 && exponent <= 64) {
    return integer_power(x, static_cast<long long>(exponent));
  }
  const double x0 = x[0];
  if (x0 == 0.0) {
    throw DomainError("power with exponent " + std::to_string(exponent) +
                      " of a series whose constant term is zero");
  }
  if (x0 < 0.0 && !is_integer(exponent)) {
    throw DomainError("fractional power of a negative value");
  }
  // y = x^a satisfies x y' = a x' y, which gives
  //   y_m = 1/(m x0) * sum_{k=1}^{m} (a k - (m - k)) x_k y_{m-k}.
  std::vector<double> y(n, 0.0);
  y[0] = std::pow(x0, exponent);
  for (std::size_t m = 1; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      acc += (exponent * static_cast<double>(k) - static_cast<double>(m - k)) * x[k] * y[m - k];
    }
    y[m] = acc / (static_cast<double>(m) * x0);
  }
  return Jet(std::move(y));
}

Jet exp(const Jet& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  if (n == 0) return Jet(std::move(y));
  y[0] = std::exp(x[0]);
  for (std::size_t m = 1; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += static_cast<double>(k) * x[k] * y[m - k];
    y[m] = acc / static_cast<double>(m);
  }
  return Jet(std::move(y));
}

Jet log(const Jet& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  if (n == 0) return Jet(std::move(y));
  if (!(x[0] > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x[0]));
  y[0] = std::log(x[0]);
  for (std::size_t m = 1; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k < m; ++k) acc += static_cast<double>(k) * y[k] * x[m - k];
    y[m] = (x[m] - acc / static_cast<double>(m)) / x[0];
  }
  return Jet(std::move(y));
}

namespace {

// Coupled recurrence s' = c x', c' = -s x'.
void sin_cos(const Jet& x, std::vector<double>& s, std::vector<double>& c) {
  const std::size_t n = x.size();
  s.assign(n, 0.0);
  c.assign(n, 0.0);
  if (n == 0) return;
  s[0] = std::sin(x[0]);
  c[0] = std::cos(x[0]);
  for (std::size_t m = 1; m < n; ++m) {
    double as = 0.0;
    double ac = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      const double kx = static_cast<double>(k) * x[k];
      as += kx * c[m - k];
      ac += kx * s[m - k];
    }
    s[m] = as / static_cast<double>(m);
    c[m] = -ac / static_cast<double>(m);
  }
}

}  // namespace

Jet sin(const Jet& x) {
  std::vector<double> s, c;
  sin_cos(x, s, c);
  return Jet(std::move(s));
}

Jet cos(const Jet& x) {
  std::vector<double> s, c;
  sin_cos(x, s, c);
  return Jet(std::move(c));
}

Jet tanh(const Jet& x) {
  // t' = w x' with w = 1 - t^2.
  const std::size_t n = x.size();
  std::vector<double> t(n, 0.0);
  std::vector<double> w(n, 0.0);
  if (n == 0) return Jet(std::move(t));
  t[0] = std::tanh(x[0]);
  w[0] = 1.0 - t[0] * t[0];
  for (std::size_t m = 1; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += static_cast<double>(k) * x[k] * w[m - k];
    t[m] = acc / static_cast<double>(m);
    double sq = 0.0;
    for (std::size_t k = 0; k <= m; ++k) sq += t[k] * t[m - k];
    w[m] = -sq;
  }
  return Jet(std::move(t));
}

Jet sqrt(const Jet& x) {
  if (x.size() > 0 && !(x[0] > 0.0)) {
    throw DomainError("sqrt of non-positive value " + std::to_string(x[0]));
  }
  return pow(x, 0.5);
}

}  // namespace hamsolve
