#pragma once

#include <cmath>

namespace thermogeo {

// Value plus gradient with respect to two independent variables.
struct Dual2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Dual2() = default;
  constexpr Dual2(double value) : v(value) {}  // NOLINT(implicit)
  constexpr Dual2(double value, double g1, double g2) : v(value), d1(g1), d2(g2) {}

  static constexpr Dual2 var1(double x) { return {x, 1.0, 0.0}; }
  static constexpr Dual2 var2(double x) { return {x, 0.0, 1.0}; }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + a.v * b.d2};
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double inv = 1.0 / b.v;
  const double q = a.v * inv;
  return {q, (a.d1 - q * b.d1) * inv, (a.d2 - q * b.d2) * inv};
}

inline Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.v);
  return {e, e * a.d1, e * a.d2};
}
inline Dual2 log(const Dual2& a) { return {std::log(a.v), a.d1 / a.v, a.d2 / a.v}; }
inline Dual2 sqrt(const Dual2& a) {
  const double r = std::sqrt(a.v);
  return {r, 0.5 * a.d1 / r, 0.5 * a.d2 / r};
}
inline Dual2 pow(const Dual2& a, double n) {
  const double p = std::pow(a.v, n);
  const double dp = n * std::pow(a.v, n - 1.0);
  return {p, dp * a.d1, dp * a.d2};
}

}  // namespace thermogeo
