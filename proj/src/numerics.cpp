#include "numerics.hpp"

#include <stdexcept>

namespace thermogeo::detail {

double newton_bisect(const ScalarFn& f, const ScalarFn& df, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("newton_bisect: no sign change");
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  // Invariant: f(lo) < 0 < f(hi); lo and hi may be in either order.
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double d = df ? df(x) : 0.0;
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    const double a = std::fmin(lo, hi), b = std::fmax(lo, hi);
    if (!(next > a && next < b)) next = 0.5 * (lo + hi);
    const double tol = xtol * (1.0 + std::fabs(next));
    if (std::fabs(next - x) <= tol || std::fabs(hi - lo) <= tol) return next;
    x = next;
  }
  return x;
}

std::optional<std::pair<double, double>> expand_bracket(const ScalarFn& f, double x0, double step, int max_steps) {
  const double f0 = f(x0);
  if (f0 == 0.0) return std::make_pair(x0, x0);
  double prev_up = x0, prev_dn = x0;
  double h = step;
  for (int i = 0; i < max_steps; ++i) {
    const double up = x0 + h;
    const double fu = f(up);
    if ((fu > 0.0) != (f0 > 0.0) && std::isfinite(fu)) return std::make_pair(prev_up, up);
    const double dn = x0 - h;
    const double fd = f(dn);
    if ((fd > 0.0) != (f0 > 0.0) && std::isfinite(fd)) return std::make_pair(dn, prev_dn);
    prev_up = up;
    prev_dn = dn;
    h *= 2.0;
  }
  return std::nullopt;
}

}  // namespace thermogeo::detail
