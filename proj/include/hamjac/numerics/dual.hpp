#pragma once

/// Forward-mode dual numbers carrying one seeded direction.
///
/// A Dual holds f and f' along a single direction; arithmetic applies the
/// sum, product, quotient and chain rules so that evaluating any expression on
/// `Dual{x, 1}` yields the exact directional derivative up to rounding.

#include <cmath>

namespace hamjac {

struct Dual {
  double value = 0.0;
  double derivative = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: constants lift implicitly
  constexpr Dual(double v, double d) : value(v), derivative(d) {}

  static constexpr Dual constant(double v) { return {v, 0.0}; }
  static constexpr Dual variable(double v) { return {v, 1.0}; }

  constexpr Dual operator-() const { return {-value, -derivative}; }
  constexpr Dual operator+() const { return *this; }

  constexpr Dual& operator+=(const Dual& o) {
    value += o.value;
    derivative += o.derivative;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    value -= o.value;
    derivative -= o.derivative;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    derivative = derivative * o.value + value * o.derivative;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    derivative = (derivative * o.value - value * o.derivative) / (o.value * o.value);
    value /= o.value;
    return *this;
  }

  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }

  friend constexpr bool operator==(const Dual&, const Dual&) = default;
};

inline Dual sin(const Dual& x) { return {std::sin(x.value), x.derivative * std::cos(x.value)}; }
inline Dual cos(const Dual& x) { return {std::cos(x.value), -x.derivative * std::sin(x.value)}; }
inline Dual tan(const Dual& x) {
  const double c = std::cos(x.value);
  return {std::tan(x.value), x.derivative / (c * c)};
}
inline Dual exp(const Dual& x) {
  const double e = std::exp(x.value);
  return {e, x.derivative * e};
}
inline Dual log(const Dual& x) { return {std::log(x.value), x.derivative / x.value}; }

// d/dx sqrt(x) at x = 0 is only infinite when the direction actually moves x.
inline Dual sqrt(const Dual& x) {
  const double r = std::sqrt(x.value);
  return {r, x.derivative == 0.0 ? 0.0 : x.derivative / (2.0 * r)};
}

inline Dual abs(const Dual& x) {
  if (x.value > 0.0) return x;
  if (x.value < 0.0) return -x;
  return {0.0, std::abs(x.derivative)};
}

/// x^e for an exponent without derivative.
inline Dual pow(const Dual& x, double e) {
  if (e == 0.0) return {1.0, 0.0};
  const double scale = e == 1.0 ? 1.0 : e * std::pow(x.value, e - 1.0);
  return {std::pow(x.value, e), x.derivative == 0.0 ? 0.0 : x.derivative * scale};
}

/// General x^y; the exponent's derivative contributes x^y ln(x) y'.
inline Dual pow(const Dual& x, const Dual& y) {
  if (y.derivative == 0.0) return pow(x, y.value);
  const double v = std::pow(x.value, y.value);
  const double dx = x.derivative == 0.0 ? 0.0 : x.derivative * y.value * std::pow(x.value, y.value - 1.0);
  return {v, dx + y.derivative * v * std::log(x.value)};
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value; }

}  // namespace hamjac
