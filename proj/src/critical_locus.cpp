#include "thermogeo/critical_locus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "numerics.hpp"
#include "thermogeo/errors.hpp"

namespace thermogeo {

namespace {

double normalized_det(const EnergyJet& j) {
  const double scale = std::fabs(j.u_ss * j.u_vv) + j.u_sv * j.u_sv;
  const double det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
  return scale == 0.0 ? 0.0 : det / scale;
}

// Partials of det(S,V) from the third derivatives.
double det_ds(const EnergyJet& j) { return j.u_sss * j.u_vv + j.u_ss * j.u_svv - 2.0 * j.u_sv * j.u_ssv; }
double det_dv(const EnergyJet& j) { return j.u_ssv * j.u_vv + j.u_ss * j.u_vvv - 2.0 * j.u_sv * j.u_svv; }

LocusSample sample_from_jet(const EnergyJet& j) {
  return {j.v, j.s, j.u_s, -j.u_v, normalized_det(j)};
}

const GasParameters* named_parameters(const ConstitutiveModel& model) {
  if (const auto* m = dynamic_cast<const VanDerWaals*>(&model)) return &m->parameters();
  if (const auto* m = dynamic_cast<const Berthelot*>(&model)) return &m->parameters();
  return nullptr;
}

// dT/dV along the locus: T = U_S and dS/dV = -det_V/det_S.
double locus_slope_t(const EnergyJet& j) { return (j.u_sv * det_ds(j) - j.u_ss * det_dv(j)) / det_ds(j); }
double locus_slope_p(const EnergyJet& j) { return -(j.u_vv - j.u_sv * det_dv(j) / det_ds(j)); }

}  // namespace

LocusSample locus_point(const ConstitutiveModel& model, double v) {
  auto d_of_logt = [&](double lt) {
    return normalized_det(model.energy_jet(StatePoint::tv(std::exp(lt), v)));
  };
  // Scan ln T from the top so the stability boundary (highest crossing) is found first.
  constexpr int kScan = 161;
  const double lt_lo = std::log(1e-8), lt_hi = std::log(1e8);
  double prev_lt = lt_hi, prev = d_of_logt(lt_hi);
  std::optional<std::pair<double, double>> bracket;
  for (int i = 1; i < kScan && !bracket; ++i) {
    const double lt = lt_hi + (lt_lo - lt_hi) * i / (kScan - 1);
    const double d = d_of_logt(lt);
    if (std::isfinite(d) && std::isfinite(prev) && (d > 0.0) != (prev > 0.0)) bracket = std::make_pair(lt, prev_lt);
    prev = d;
    prev_lt = lt;
  }
  if (!bracket) {
    std::ostringstream os;
    os << "no degeneracy at V = " << v << ": det keeps one sign for T in [1e-8, 1e8]";
    throw NoRoot(os.str());
  }
  const double lt = detail::newton_bisect(d_of_logt, {}, bracket->first, bracket->second, 1e-15);
  // Newton polish in S with the exact det_S.
  EnergyJet j = model.energy_jet(model.to_entropy_chart(StatePoint::tv(std::exp(lt), v)));
  for (int it = 0; it < 3; ++it) {
    const double det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
    const double ds = det_ds(j);
    if (det == 0.0 || ds == 0.0) break;
    const EnergyJet next = model.energy_jet(StatePoint::sv(j.s - det / ds, v));
    if (!(std::fabs(normalized_det(next)) < std::fabs(normalized_det(j)))) break;
    j = next;
  }
  return sample_from_jet(j);
}

LocusPolyline degeneracy_locus(const ConstitutiveModel& model, double v_lo, double v_hi, int n) {
  if (!(v_hi > v_lo) || n < 2) throw DomainError("locus needs v_hi > v_lo and at least two samples");
  if (!(v_lo > model.min_volume())) throw DomainError("locus volume range must lie above the covolume");
  LocusPolyline out;
  const GasParameters* gp = named_parameters(model);
  const bool bert = model.kind() == ModelKind::Berthelot;
  out.branch = gp ? (bert ? "closed-form positive-T branch" : "closed-form") : "numeric";
  if (gp && gp->a == 0.0) throw NoRoot("no degeneracy locus without attraction (a = 0)");

  for (int i = 0; i < n; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (n - 1);
    if (!gp) {
      out.samples.push_back(locus_point(model, v));
      continue;
    }
    const double w = v - gp->b;
    const double t = bert ? w / v * std::sqrt(2.0 * gp->a / (gp->r_gas * v))
                          : 2.0 * gp->a * w * w / (gp->r_gas * v * v * v);
    LocusSample smp;
    smp.v = v;
    smp.t = t;
    smp.p = bert ? gp->a * (v - 2.0 * gp->b) / (t * v * v * v) : gp->a * (v - 2.0 * gp->b) / (v * v * v);
    smp.s = model.entropy_at(t, v);
    smp.det_residual = normalized_det(model.energy_jet(StatePoint::tv(t, v)));
    out.samples.push_back(smp);
  }
  return out;
}

CriticalPoint critical_point(const ConstitutiveModel& model) {
  const double vmin = model.min_volume();
  if (vmin > 0.0) return critical_point(model, 1.2 * vmin, 40.0 * vmin);
  return critical_point(model, 1e-2, 1e2);
}

CriticalPoint critical_point(const ConstitutiveModel& model, double v_lo, double v_hi, int scan) {
  if (!(v_hi > v_lo) || !(v_lo > model.min_volume()) || scan < 3)
    throw DomainError("critical point search needs an admissible volume range");
  auto slope_at = [&](double v) {
    const LocusSample smp = locus_point(model, v);
    return locus_slope_t(model.energy_jet(StatePoint::sv(smp.s, v)));
  };

  // Geometric scan for the maximum of T: dT/dV going from + to -.
  std::optional<std::pair<double, double>> bracket;
  std::optional<std::pair<double, double>> prev;
  int found = 0;
  for (int i = 0; i < scan && !bracket; ++i) {
    const double v = v_lo * std::pow(v_hi / v_lo, static_cast<double>(i) / (scan - 1));
    double h = 0.0;
    try {
      h = slope_at(v);
      ++found;
    } catch (const NoRoot&) {
      prev.reset();
      continue;
    }
    if (prev && prev->second > 0.0 && h <= 0.0) bracket = std::make_pair(prev->first, v);
    prev = std::make_pair(v, h);
  }
  if (found == 0) throw NoCriticalPoint("degeneracy locus is empty for " + model.name());
  if (!bracket) throw NoCriticalPoint("temperature along the degeneracy locus has no interior maximum");

  CriticalPoint cp;
  cp.v_c = detail::newton_bisect(slope_at, {}, bracket->first, bracket->second, 1e-15);
  const LocusSample smp = locus_point(model, cp.v_c);
  const EnergyJet j = model.energy_jet(StatePoint::sv(smp.s, cp.v_c));
  cp.s_c = smp.s;
  cp.t_c = smp.t;
  cp.p_c = smp.p;
  cp.dt_dv_locus = locus_slope_t(j);
  cp.dp_dv_locus = locus_slope_p(j);
  const double t = cp.t_c;
  cp.dp_dv_isotherm = model.isothermal_dp_dv(StatePoint::tv(t, cp.v_c));
  const double h = fd_step(cp.v_c, 1);
  cp.d2p_dv2_isotherm = (model.isothermal_dp_dv(StatePoint::tv(t, cp.v_c + h)) -
                         model.isothermal_dp_dv(StatePoint::tv(t, cp.v_c - h))) /
                        (2.0 * h);
  if (model.kind() == ModelKind::Berthelot) {
    cp.has_negative_branch = true;
    cp.t_c_negative = -cp.t_c;
    cp.p_c_negative = -cp.p_c;
  }
  return cp;
}

CriticalPoint vdw_critical_point(const GasParameters& p) {
  if (!(p.a > 0.0 && p.b > 0.0)) throw NoCriticalPoint("vdW critical point needs a > 0 and b > 0");
  CriticalPoint cp;
  cp.v_c = 3.0 * p.b;
  cp.p_c = p.a / (27.0 * p.b * p.b);
  cp.t_c = 8.0 * p.a / (27.0 * p.b * p.r_gas);
  return cp;
}

CriticalPoint berthelot_critical_point(const GasParameters& p) {
  if (!(p.a > 0.0 && p.b > 0.0)) throw NoCriticalPoint("Berthelot critical point needs a > 0 and b > 0");
  CriticalPoint cp;
  cp.v_c = 3.0 * p.b;
  cp.t_c = std::sqrt(8.0 * p.a / (27.0 * p.r_gas * p.b));
  cp.p_c = std::sqrt(p.a * p.r_gas / (216.0 * p.b * p.b * p.b));
  cp.has_negative_branch = true;
  cp.t_c_negative = -cp.t_c;
  cp.p_c_negative = -cp.p_c;
  return cp;
}

ReducedPoint reduced_curves(ModelKind kind, double v_r) {
  if (!(v_r > 1.0 / 3.0)) throw DomainError("reduced volume must exceed 1/3 (V > b)");
  ReducedPoint r;
  const double v3 = v_r * v_r * v_r;
  switch (kind) {
    case ModelKind::VanDerWaals:
      r.p_r = (3.0 * v_r - 2.0) / v3;
      r.t_r = (3.0 * v_r - 1.0) * (3.0 * v_r - 1.0) / (4.0 * v3);
      break;
    case ModelKind::Berthelot: {
      const double root = std::sqrt(v3);
      r.t_r = (3.0 * v_r - 1.0) / (2.0 * root);
      r.p_r = 2.0 * (3.0 * v_r - 2.0) / (root * (3.0 * v_r - 1.0));
      break;
    }
    default:
      throw UnsupportedModel("reduced curves exist for vdw and berthelot only, got " + to_string(kind));
  }
  r.p_r_sq = r.p_r * r.p_r;
  r.t_r_sq = r.t_r * r.t_r;
  return r;
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) throw DomainError("leading cubic coefficient is zero");
  const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
  // x = y - a/3 gives y^3 + P y + Q = 0.
  const double pp = b - a * a / 3.0;
  const double qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 4.0 * pp * pp * pp + 27.0 * qq * qq;
  const double shift = -a / 3.0;
  std::vector<double> roots;
  if (pp == 0.0 && qq == 0.0) {
    roots = {shift, shift, shift};
  } else if (disc <= 0.0 && pp < 0.0) {
    const double m = 2.0 * std::sqrt(-pp / 3.0);
    const double arg = std::clamp(3.0 * qq / (pp * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    const double sq = std::sqrt(std::fmax(disc / 108.0, 0.0));
    roots.push_back(shift + std::cbrt(-qq / 2.0 + sq) + std::cbrt(-qq / 2.0 - sq));
  }
  auto f = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
  auto df = [&](double x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };
  for (double& x : roots) {
    for (int it = 0; it < 4; ++it) {
      const double d = df(x);
      if (d == 0.0) break;
      const double next = x - f(x) / d;
      if (!(std::fabs(f(next)) < std::fabs(f(x)))) break;
      x = next;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

double reduced_pressure(double v) { return (3.0 * v - 2.0) / (v * v * v); }
double reduced_temperature(double v) { return (3.0 * v - 1.0) * (3.0 * v - 1.0) / (4.0 * v * v * v); }

// Trigonometric forms indexed by branch (1 largest, 2 smallest, 3 middle).
std::optional<std::array<double, 3>> trig_pressure_roots(double p) {
  const double h = std::asin(std::sqrt(p)) / 3.0;
  const double sp = std::sqrt(p), r3 = std::sqrt(3.0);
  return std::array<double, 3>{(r3 * std::cos(h) - std::sin(h)) / sp, -(r3 * std::cos(h) + std::sin(h)) / sp,
                               2.0 * std::sin(h) / sp};
}

std::optional<std::array<double, 3>> trig_temperature_roots(double t) {
  if (t > 1.0) return std::nullopt;
  const double f = 9.0 - 8.0 * t;
  // For 0 < t < 1 the two square roots of negative quantities in the
  // arctangent argument cancel, leaving a real angle.
  const double g = std::atan((8.0 * t * t - 36.0 * t + 27.0) / (8.0 * std::sqrt(t * t * t * (1.0 - t))));
  const double c = std::sqrt(3.0 * f) * std::cos(g / 3.0) / (4.0 * t);
  const double s = std::sqrt(f) * std::sin(g / 3.0) / (4.0 * t);
  const double base = 3.0 / (4.0 * t);
  return std::array<double, 3>{base + c + s, base - c + s, base - 2.0 * s};
}

}  // namespace

VolumeRoots vdw_volume_roots(RootVariable of, double value) {
  VolumeRoots out;
  out.of = of;
  out.value = value;
  std::vector<double> roots;
  std::optional<std::array<double, 3>> trig;
  if (of == RootVariable::Pressure) {
    if (!(value > 0.0 && value <= 1.0)) throw DomainError("reduced pressure must lie in (0, 1]");
    roots = real_cubic_roots(value, 0.0, -3.0, 2.0);
    trig = trig_pressure_roots(value);
  } else {
    if (!(value > 0.0 && value <= 9.0 / 8.0)) throw DomainError("reduced temperature must lie in (0, 9/8]");
    roots = real_cubic_roots(4.0 * value, -9.0, 6.0, -1.0);
    trig = trig_temperature_roots(value);
    if (!trig) out.notes.push_back("trigonometric forms are complex for t_r > 1; only the cubic roots are reported");
  }

  auto add = [&](int branch, double v) {
    VolumeRoot r;
    r.branch = branch;
    r.v_r = v;
    r.physical = v > 1.0 / 3.0;
    const double back = of == RootVariable::Pressure ? reduced_pressure(v) : reduced_temperature(v);
    r.back_substitution = std::fabs(back - value);
    if (trig) {
      r.trig = (*trig)[static_cast<std::size_t>(branch - 1)];
      r.trig_mismatch = std::fabs(*r.trig - v) / std::fmax(1.0, std::fabs(v));
      if (!(r.trig_mismatch < 1e-8)) {
        std::ostringstream os;
        os << "branch " << branch << ": trigonometric form " << *r.trig << " differs from cubic root " << v;
        out.notes.push_back(os.str());
      }
    }
    out.roots.push_back(r);
  };
  if (roots.size() == 3) {
    add(1, roots[2]);
    add(2, roots[0]);
    add(3, roots[1]);
  } else {
    // Past the critical temperature only the small root survives.
    add(2, roots[0]);
  }
  return out;
}

std::vector<CoexistencePoint> coexistence_curve(ModelKind kind, const std::vector<double>& t_r_samples) {
  if (kind != ModelKind::VanDerWaals)
    throw UnsupportedModel("coexistence curve is defined for vdw only, got " + to_string(kind));
  std::vector<CoexistencePoint> out;
  for (double t : t_r_samples) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("coexistence curve needs t_r in (0, 1]");
    CoexistencePoint pt;
    pt.t_r = t;
    // Roots with v_r <= 1/3 sit inside the covolume; the pressure formula
    // still evaluates there but has no meaning, so those branches stay empty.
    for (const VolumeRoot& r : vdw_volume_roots(RootVariable::Temperature, t).roots)
      if (r.physical) pt.p_r[static_cast<std::size_t>(r.branch - 1)] = reduced_pressure(r.v_r);
    out.push_back(pt);
  }
  return out;
}

double spinodal_slope(double v_r) {
  const double d = 3.0 * v_r - 1.0;
  if (std::fabs(d) < 1e-14) throw DomainError("spinodal slope is undefined at v_r = 1/3");
  return 8.0 / d;
}

}  // namespace thermogeo
