#pragma once

#include <array>
#include <cmath>

namespace thermogeo {

// Truncated Taylor jet of a univariate function: value and derivatives
// of order 1..3 at a point.
struct Taylor3 {
  std::array<double, 4> c{};  // c[k] = k-th derivative

  constexpr Taylor3() = default;
  constexpr Taylor3(double v) : c{v, 0.0, 0.0, 0.0} {}  // NOLINT(implicit)
  constexpr Taylor3(double v, double d1, double d2, double d3) : c{v, d1, d2, d3} {}

  static constexpr Taylor3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }

  double value() const { return c[0]; }
  double d1() const { return c[1]; }
  double d2() const { return c[2]; }
  double d3() const { return c[3]; }
};

Taylor3 operator+(const Taylor3& a, const Taylor3& b);
Taylor3 operator-(const Taylor3& a, const Taylor3& b);
Taylor3 operator-(const Taylor3& a);
Taylor3 operator*(const Taylor3& a, const Taylor3& b);
Taylor3 operator/(const Taylor3& a, const Taylor3& b);

// Composition g(a) where g and its derivatives up to order 3 are given at a.value().
Taylor3 compose(const Taylor3& a, double g0, double g1, double g2, double g3);

Taylor3 exp(const Taylor3& a);
Taylor3 log(const Taylor3& a);
Taylor3 pow(const Taylor3& a, double n);
Taylor3 pow(const Taylor3& a, const Taylor3& b);

}  // namespace thermogeo
