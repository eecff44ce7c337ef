#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hamsolve {

/// Truncated Taylor series in the embedding parameter p:
///   x(p) = c[0] + c[1] p + ... + c[M] p^M.
///
/// All arithmetic is closed at the common length M+1; mixing jets of
/// different lengths throws std::invalid_argument. Analytic functions use
/// the standard Taylor recurrences, so coefficients are exact up to
/// rounding (no sampling).
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::vector<double> coeffs);
  Jet(std::initializer_list<double> coeffs);

  /// Constant c[0] = value, all higher coefficients zero.
  static Jet constant(double value, std::size_t length);

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  std::span<const double> coeffs() const { return c_; }

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(Jet lhs, double s) { return lhs *= s; }
  friend Jet operator*(double s, Jet rhs) { return rhs *= s; }
  friend Jet operator-(Jet x) { return x *= -1.0; }
  /// Cauchy product, truncated.
  friend Jet operator*(const Jet& lhs, const Jet& rhs);

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  std::vector<double> c_;
};

Jet pow(const Jet& x, double exponent);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tanh(const Jet& x);
Jet sqrt(const Jet& x);

}  // namespace hamsolve
