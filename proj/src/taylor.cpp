#include "thermogeo/taylor.hpp"

#include <stdexcept>

namespace thermogeo {

Taylor3 operator+(const Taylor3& a, const Taylor3& b) {
  return {a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]};
}

Taylor3 operator-(const Taylor3& a, const Taylor3& b) {
  return {a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2], a.c[3] - b.c[3]};
}

Taylor3 operator-(const Taylor3& a) { return {-a.c[0], -a.c[1], -a.c[2], -a.c[3]}; }

Taylor3 operator*(const Taylor3& a, const Taylor3& b) {
  // Leibniz rule.
  return {a.c[0] * b.c[0],
          a.c[1] * b.c[0] + a.c[0] * b.c[1],
          a.c[2] * b.c[0] + 2.0 * a.c[1] * b.c[1] + a.c[0] * b.c[2],
          a.c[3] * b.c[0] + 3.0 * a.c[2] * b.c[1] + 3.0 * a.c[1] * b.c[2] + a.c[0] * b.c[3]};
}

Taylor3 compose(const Taylor3& a, double g0, double g1, double g2, double g3) {
  // Faa di Bruno up to third order.
  const double x1 = a.c[1], x2 = a.c[2], x3 = a.c[3];
  return {g0,
          g1 * x1,
          g2 * x1 * x1 + g1 * x2,
          g3 * x1 * x1 * x1 + 3.0 * g2 * x1 * x2 + g1 * x3};
}

Taylor3 operator/(const Taylor3& a, const Taylor3& b) {
  const double x = b.c[0];
  if (x == 0.0) throw std::domain_error("division by zero in expression");
  const double r = 1.0 / x;
  return a * compose(b, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Taylor3 exp(const Taylor3& a) {
  const double e = std::exp(a.c[0]);
  return compose(a, e, e, e, e);
}

Taylor3 log(const Taylor3& a) {
  const double x = a.c[0];
  if (!(x > 0.0)) throw std::domain_error("logarithm of a non-positive value");
  const double r = 1.0 / x;
  return compose(a, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Taylor3 pow(const Taylor3& a, double n) {
  const double x = a.c[0];
  if (n == 0.0) return Taylor3(1.0);
  if (n == 1.0) return a;
  const bool integral = std::floor(n) == n;
  if (x < 0.0 && !integral) throw std::domain_error("fractional power of a negative value");
  if (x == 0.0 && n < 3.0 && !(integral && n > 0.0)) {
    throw std::domain_error("power is not three times differentiable at zero");
  }
  // Falling-factorial coefficients; a zero coefficient drops the term so that
  // integer powers stay finite at x = 0.
  auto term = [&](double coef, int order) { return coef == 0.0 ? 0.0 : coef * std::pow(x, n - order); };
  const double g0 = std::pow(x, n);
  const double g1 = term(n, 1);
  const double g2 = term(n * (n - 1.0), 2);
  const double g3 = term(n * (n - 1.0) * (n - 2.0), 3);
  return compose(a, g0, g1, g2, g3);
}

Taylor3 pow(const Taylor3& a, const Taylor3& b) {
  if (b.c[1] == 0.0 && b.c[2] == 0.0 && b.c[3] == 0.0) return pow(a, b.c[0]);
  return exp(b * log(a));
}

}  // namespace thermogeo
