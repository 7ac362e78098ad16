#include "thermogeo/curvature.hpp"

#include <cmath>
#include <sstream>

#include "numerics.hpp"
#include "thermogeo/errors.hpp"

namespace thermogeo {

HessianMetricField::HessianMetricField(int n) : n_(n) {
  if (n < 1 || n > kMaxFieldDimension) {
    std::ostringstream os;
    os << "metric field dimension must be in [1, " << kMaxFieldDimension << "], got " << n;
    throw DomainError(os.str());
  }
  g_.assign(static_cast<std::size_t>(n * n), 0.0);
  d_.assign(static_cast<std::size_t>(n * n * n), 0.0);
}

HessianMetricField HessianMetricField::from_metric2(const MetricTensor2& m) {
  HessianMetricField f(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      f.metric(i, j) = m.entry(i, j);
      for (int k = 0; k < 2; ++k) f.third(i, j, k) = m.deriv(i, j, k);
    }
  return f;
}

double HessianMetricField::symmetry_residual() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      worst = std::fmax(worst, std::fabs(metric(i, j) - metric(j, i)));
      for (int k = 0; k < n_; ++k) {
        const double x = third(i, j, k);
        worst = std::fmax(worst, std::fabs(x - third(j, i, k)));
        worst = std::fmax(worst, std::fabs(x - third(i, k, j)));
        worst = std::fmax(worst, std::fabs(x - third(k, j, i)));
      }
    }
  return worst;
}

std::vector<double> metric_inverse(const HessianMetricField& f) {
  const int n = f.dimension();
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
  if (n == 2) {
    const double a = f.metric(0, 0), b = f.metric(0, 1), c = f.metric(1, 1);
    const double det = a * c - b * b;
    if (degenerate_2x2(a, b, c)) throw SingularState("metric is degenerate at this point", det, 0, 0);
    return {c / det, -b / det, -b / det, a / det};
  }

  // Gauss-Jordan with partial pivoting. Degeneracy is judged against the
  // Hadamard bound (product of row norms).
  std::vector<double> a(static_cast<std::size_t>(n * n)), inv(static_cast<std::size_t>(n * n), 0.0);
  double hadamard = 1.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      a[at(i, j)] = f.metric(i, j);
      row += f.metric(i, j) * f.metric(i, j);
    }
    hadamard *= std::sqrt(row);
    inv[at(i, i)] = 1.0;
  }
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[at(r, col)]) > std::fabs(a[at(piv, col)])) piv = r;
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[at(piv, j)], a[at(col, j)]);
        std::swap(inv[at(piv, j)], inv[at(col, j)]);
      }
      det = -det;
    }
    const double p = a[at(col, col)];
    det *= p;
    if (p == 0.0) break;
    for (int j = 0; j < n; ++j) {
      a[at(col, j)] /= p;
      inv[at(col, j)] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double m = a[at(r, col)];
      if (m == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[at(r, j)] -= m * a[at(col, j)];
        inv[at(r, j)] -= m * inv[at(col, j)];
      }
    }
  }
  if (!(std::fabs(det) >= kDegeneracyTolerance * hadamard) || hadamard == 0.0)
    throw SingularState("metric is degenerate at this point", det, 0, 0);
  return inv;
}

ChristoffelSymbols christoffel(const HessianMetricField& f) {
  const int n = f.dimension();
  const std::vector<double> ginv = metric_inverse(f);
  ChristoffelSymbols out;
  out.n = n;
  out.c.assign(static_cast<std::size_t>(n * n * n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int m = 0; m < n; ++m) sum += f.third(i, j, m) * ginv[static_cast<std::size_t>(k * n + m)];
        out.c[static_cast<std::size_t>((k * n + i) * n + j)] = 0.5 * sum;
      }
  return out;
}

namespace {

// One term of R^l_ijk before summing over m, n, s.
struct RiemannTerms {
  const HessianMetricField& f;
  const std::vector<double>& ginv;
  int n;
  double gi(int a, int b) const { return ginv[static_cast<std::size_t>(a * n + b)]; }
  double term(int l, int i, int j, int k, int m, int nn, int s) const {
    return 0.25 * (f.third(i, j, m) * f.third(s, nn, k) - f.third(s, nn, j) * f.third(k, i, m)) * gi(m, nn) *
           gi(l, s);
  }
};

}  // namespace

RiemannRicci riemann_ricci(const HessianMetricField& f) {
  const int n = f.dimension();
  const std::vector<double> ginv = metric_inverse(f);
  const RiemannTerms t{f, ginv, n};
  RiemannRicci out;
  out.n = n;
  out.riemann.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  out.ricci.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double sum = 0.0;
          for (int m = 0; m < n; ++m)
            for (int nn = 0; nn < n; ++nn)
              for (int s = 0; s < n; ++s) sum += t.term(l, i, j, k, m, nn, s);
          out.riemann[static_cast<std::size_t>(((l * n + i) * n + j) * n + k)] = sum;
        }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += out.curvature(j, i, j, k);
      out.ricci[static_cast<std::size_t>(i * n + k)] = sum;
    }
  return out;
}

TensorialCurvature tensorial_curvature(const HessianMetricField& f) {
  const int n = f.dimension();
  const std::vector<double> ginv = metric_inverse(f);
  const RiemannTerms t{f, ginv, n};
  TensorialCurvature out;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double gik = t.gi(i, k);
      if (gik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn)
            for (int s = 0; s < n; ++s) {
              const double x = gik * t.term(j, i, j, k, m, nn, s);
              out.value += x;
              out.scale += std::fabs(x);
            }
    }
  return out;
}

double scalar_curvature_tensorial(const HessianMetricField& f) { return tensorial_curvature(f).value; }

double closed2d_numerator(const MetricTensor2& m) {
  const double r[3][3] = {{m.e11, m.deriv(0, 0, 0), m.deriv(0, 0, 1)},
                          {m.e12, m.deriv(0, 1, 0), m.deriv(0, 1, 1)},
                          {m.e22, m.deriv(1, 1, 0), m.deriv(1, 1, 1)}};
  return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
         r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

double scalar_curvature_closed2d(const MetricTensor2& m) {
  const double det = m.det();
  if (degenerate_2x2(m.e11, m.e12, m.e22))
    throw SingularState("curvature diverges: metric is degenerate at this point", det, 0, 0);
  return -closed2d_numerator(m) / (2.0 * det * det);
}

double gaussian_curvature_closed2d(const MetricTensor2& m) { return 0.5 * scalar_curvature_closed2d(m); }

ElementaryCurvature scalar_curvature_elementary(const Coefficients& c, const CoefficientPartials& d) {
  const auto e = weinhold_entries_from_coefficients(c);
  const double det = c.t / (c.k * c.v * c.cv);
  if (!std::isfinite(det) || degenerate_2x2(e[0], e[1], e[2]))
    throw SingularState("curvature diverges: metric is degenerate at this point", det, c.t, c.v);
  if (c.alpha == 0.0) throw SingularState("thermal expansion vanishes; coefficient route undefined", det, c.t, c.v);

  const double a = c.alpha, k = c.k, cv = c.cv, cp = c.cp, t = c.t, v = c.v;
  ElementaryCurvature out;
  CurvatureBreakdown& p = out.parts;
  p.h = a / k - cv / v + (cp - cv) / a * d.dalpha_dV - cp / k * d.dk_dV + d.dcv_dV;
  p.g = d.dcv_dV + a / k * d.dcv_dS;
  p.f = d.dk_dV - k * d.dalpha_dV / a;
  p.j = 1.0 - d.dcv_dS;
  p.d = a / k + d.dcv_dV;
  p.b = a / v + d.dalpha_dV;
  const double bracket = p.h * p.g + cv * a / (k * k) * p.f * (t * v * a * p.f / k - p.j);
  out.value = t / (2.0 * cv * cv * cv * det) * bracket;
  return out;
}

ConstantCvCurvature scalar_curvature_constant_cv(const ConstitutiveModel& model, const StatePoint& s) {
  const auto prof = model.constant_cv_profile();
  if (!prof) throw UnsupportedModel("constant-Cv curvature needs a constant-Cv model, got " + model.name());
  const StatePoint sv = model.to_entropy_chart(s);
  const double cv = prof->cv;
  const Taylor3 f1 = prof->f1(sv.x2), f2 = prof->f2(sv.x2);
  const double e = std::exp((sv.x1 - prof->s0) / cv);
  const double t = e * f1.value() / cv;

  const double det_ideal = e * e / (cv * cv) * (f1.value() * f1.d2() - f1.d1() * f1.d1());
  const double det = det_ideal - e * f1.value() * f2.d2() / cv;
  const double e11 = e * f1.value() / (cv * cv), e12 = e * f1.d1() / cv, e22 = e * f1.d2() - cv * f2.d2();
  if (degenerate_2x2(e11, e12, e22))
    throw SingularState("curvature diverges: metric is degenerate at this point", det, sv.x1, sv.x2);

  ConstantCvCurvature out;
  out.from_profile = e * f1.value() * f2.d2() / (2.0 * t * cv * cv) * det_ideal / (det * det);
  const Coefficients c = model.coefficients(sv);
  const CoefficientPartials d = model.coefficient_partials(sv);
  out.dlnk_ds = d.dk_dS / c.k;
  out.from_compressibility = cv / (2.0 * t) * out.dlnk_ds * (out.dlnk_ds + 1.0 / cv);
  // Each form is a product; its natural size is what the factors allow.
  const double scale = cv / (2.0 * t) * std::fabs(out.dlnk_ds) * (std::fabs(out.dlnk_ds) + 1.0 / std::fabs(cv));
  out.residual = detail::rel_diff(out.from_profile, out.from_compressibility, scale);
  return out;
}

bool negativity_test(const ConstitutiveModel& model, const StatePoint& s) {
  const auto prof = model.constant_cv_profile();
  if (!prof) throw UnsupportedModel("negativity test needs a constant-Cv model, got " + model.name());
  const StatePoint sv = model.to_entropy_chart(s);
  const Coefficients c = model.coefficients(sv);
  const CoefficientPartials d = model.coefficient_partials(sv);
  const double x = d.dk_dS / c.k;
  return -1.0 / prof->cv < x && x < 0.0;
}

double vdw_scalar_curvature(const GasParameters& p, double t, double v) {
  const double pr = p.r_gas * t / (v - p.b) - p.a / (v * v);
  const double den = pr * v * v * v - p.a * v + 2.0 * p.a * p.b;
  if (den == 0.0) throw SingularState("curvature diverges on the degeneracy locus", 0.0, t, v);
  return p.a * p.r_gas * v * v * v / (p.cv0 * den * den);
}

double berthelot_scalar_curvature(const GasParameters& p, double t, double v) {
  const double r = p.r_gas, a = p.a, b = p.b, c0 = p.cv0;
  const double w = v - b;
  const double cv = c0 + 2.0 * a / (v * t * t);
  const double den = r * t * t * v * v * v - 2.0 * a * w * w;
  if (den == 0.0) throw SingularState("curvature diverges on the degeneracy locus", 0.0, t, v);
  const double poly = (2.0 * c0 - r) * v * v - 3.0 * c0 * b * v + c0 * b * b;
  const double num =
      r * t * t * v * v * v * poly + a * r * v * v * (5.0 * v - 3.0 * b) * w - a * c0 * w * w * w * w;
  return 2.0 * a * num / (t * cv * cv * den * den);
}

double berthelot_curvature_pqw(const GasParameters& p, double t, double v) {
  const double r = p.r_gas, a = p.a, b = p.b;
  const double cv = p.cv0 + 2.0 * a / (v * t * t);
  const double w = v - b;
  const double den = r * t * t * v * v * v - 2.0 * a * w * w;
  const double v2 = v * v, v3 = v2 * v, v4 = v3 * v, v5 = v4 * v, v6 = v5 * v, v7 = v6 * v;
  const double b2 = b * b, b3 = b2 * b, b4 = b3 * b;
  const double pp = (2.0 * cv - r) * v2 - 3.0 * cv * b * v + cv * b2;
  const double qq = -r * v5 + 3.0 * r * b * v4 - 3.0 * r * b2 * v3 + (r * b3 + cv + r) * v2 -
                    b * (b - 2.0 * v) * (r + cv);
  const double ww = -r * v7 + 4.0 * r * b * v6 - 6.0 * r * b2 * v5 + (2.0 * cv + r + 4.0 * r * b3) * v4 -
                    (8.0 * cv + 3.0 * r + r * b3) * b * v3 + (12.0 * cv + 3.0 * r) * b2 * v2 -
                    (8.0 * cv + r) * b3 * v + 2.0 * cv * b4;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double num = t4 * v4 * r * cv * pp + t2 * v3 * r * a * qq + a * a * ww;
  return 2.0 * a * num / (cv * cv * cv * t3 * v * den * den);
}

double route_residual(double a, double b, double scale) { return detail::rel_diff(a, b, 1e-6 * scale); }

double CurvatureReport::value() const {
  for (const auto* r : {&r_tensorial, &r_closed2d, &r_elementary, &r_model_closed})
    if (r->has_value()) return **r;
  return 0.0;
}

CurvatureReport curvature_report(const ConstitutiveModel& model, const StatePoint& s) {
  const StatePoint sv = model.to_entropy_chart(s);
  const MetricTensor2 m = weinhold_metric(model, sv);
  CurvatureReport rep;

  const TensorialCurvature tc = tensorial_curvature(HessianMetricField::from_metric2(m));
  rep.r_tensorial = tc.value;
  rep.curvature_scale = tc.scale;
  rep.r_closed2d = scalar_curvature_closed2d(m);

  const Coefficients c = model.coefficients(sv);
  try {
    const ElementaryCurvature el = scalar_curvature_elementary(c, model.coefficient_partials(sv));
    if (std::isfinite(el.value)) {
      rep.r_elementary = el.value;
      rep.breakdown = el.parts;
    }
  } catch (const SingularState&) {
    // alpha = 0: the coefficient route does not apply at this state.
  }

  if (const auto* vdw = dynamic_cast<const VanDerWaals*>(&model)) {
    rep.r_model_closed = vdw_scalar_curvature(vdw->parameters(), c.t, c.v);
  } else if (const auto* bert = dynamic_cast<const Berthelot*>(&model)) {
    rep.r_model_closed = berthelot_scalar_curvature(bert->parameters(), c.t, c.v);
    rep.r_printed_closed = berthelot_curvature_pqw(bert->parameters(), c.t, c.v);
    rep.printed_form_discrepancy =
        route_residual(*rep.r_printed_closed, *rep.r_tensorial, rep.curvature_scale) > kRouteTolerance;
  } else if (model.has_constant_cv()) {
    rep.r_model_closed = scalar_curvature_constant_cv(model, sv).from_profile;
  }

  const std::optional<double> routes[] = {rep.r_tensorial, rep.r_closed2d, rep.r_elementary, rep.r_model_closed};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (routes[i] && routes[j])
        rep.max_pairwise_residual =
            std::fmax(rep.max_pairwise_residual, route_residual(*routes[i], *routes[j], rep.curvature_scale));
  return rep;
}

namespace {

// sqrt|det| g^{ij} d_j ln T at a state, the flux whose divergence is the
// Laplace-Beltrami operator.
std::array<double, 3> log_temperature_flux(const EnergyJet& j) {
  const double det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
  if (degenerate_2x2(j.u_ss, j.u_sv, j.u_vv))
    throw SingularState("Laplacian undefined: metric is degenerate at this point", det, j.s, j.v);
  const double t = j.u_s;
  const double f1 = j.u_ss / t, f2 = j.u_sv / t;
  const double root = std::sqrt(std::fabs(det));
  const double w1 = root * (j.u_vv * f1 - j.u_sv * f2) / det;
  const double w2 = root * (-j.u_sv * f1 + j.u_ss * f2) / det;
  return {w1, w2, root};
}

}  // namespace

double laplacian_ln_temperature(const ConstitutiveModel& model, const StatePoint& s, LaplacianScheme scheme) {
  const StatePoint sv = model.to_entropy_chart(s);
  const EnergyJet j = model.energy_jet(sv);
  const double t = j.u_s;
  if (!(t > 0.0)) throw DomainError("ln T needs T > 0");

  if (scheme == LaplacianScheme::FiniteDifference) {
    const double hs = fd_step(sv.x1, 1), hv = fd_step(sv.x2, 1);
    auto flux = [&](double ds, double dv) {
      return log_temperature_flux(model.energy_jet(StatePoint::sv(sv.x1 + ds, sv.x2 + dv)));
    };
    const double div = (flux(hs, 0)[0] - flux(-hs, 0)[0]) / (2 * hs) + (flux(0, hv)[1] - flux(0, -hv)[1]) / (2 * hv);
    return div / log_temperature_flux(j)[2];
  }

  const MetricTensor2 m = MetricTensor2::from_energy_jet(j);
  const HessianMetricField field = HessianMetricField::from_metric2(m);
  const std::vector<double> ginv = metric_inverse(field);
  const ChristoffelSymbols gam = christoffel(field);
  // First and second partials of ln T; dT/dS = U_SS and dT/dV = U_SV.
  const double grad[2] = {j.u_ss / t, j.u_sv / t};
  const double hess[2][2] = {{j.u_sss / t - grad[0] * grad[0], j.u_ssv / t - grad[0] * grad[1]},
                             {j.u_ssv / t - grad[0] * grad[1], j.u_svv / t - grad[1] * grad[1]}};
  double lap = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double cov = hess[a][b];
      for (int k = 0; k < 2; ++k) cov -= gam(k, a, b) * grad[k];
      lap += ginv[static_cast<std::size_t>(a * 2 + b)] * cov;
    }
  return lap;
}

ConformalReport ruppeiner_from_weinhold(const ConstitutiveModel& model, const StatePoint& s,
                                        LaplacianScheme scheme) {
  const StatePoint sv = model.to_entropy_chart(s);
  ConformalReport rep;
  rep.t = model.temperature_at(sv.x1, sv.x2);
  if (!(rep.t > 0.0)) throw DomainError("entropy metric needs T > 0");
  const MetricTensor2 w = weinhold_metric(model, sv);
  rep.r_energy = scalar_curvature_closed2d(w);
  rep.laplacian_ln_t = laplacian_ln_temperature(model, sv, scheme);
  rep.r_entropy = rep.t * (rep.r_energy + rep.laplacian_ln_t);
  rep.r_entropy_direct = scalar_curvature_closed2d(ruppeiner_metric(model, sv).scaled(-1.0));
  const double scale = rep.t * tensorial_curvature(HessianMetricField::from_metric2(w)).scale;
  rep.residual = route_residual(rep.r_entropy, rep.r_entropy_direct, scale);
  return rep;
}

std::string to_string(FlatCase c) {
  switch (c) {
    case FlatCase::ExponentialF1: return "exponential-f1";
    case FlatCase::AffineF2: return "affine-f2";
    case FlatCase::DegenerateF1Zero: return "f1-zero";
    case FlatCase::NonFlat: return "non-flat";
  }
  return "unknown";
}

FlatClassification zero_curvature_classify(const ConstantCvProfile& prof, double v_lo, double v_hi, int samples) {
  if (!(v_hi > v_lo) || samples < 2) throw DomainError("classification needs v_hi > v_lo and at least 2 samples");
  constexpr double tol = 1e-10;
  FlatClassification out;
  out.samples = samples;
  bool f1_zero = true;
  for (int i = 0; i < samples; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (samples - 1);
    const Taylor3 f1 = prof.f1(v), f2 = prof.f2(v);
    if (f1.value() != 0.0 || f1.d1() != 0.0 || f1.d2() != 0.0) f1_zero = false;
    const double q = f1.value() * f1.d2() - f1.d1() * f1.d1();
    const double qs = std::fabs(f1.value() * f1.d2()) + f1.d1() * f1.d1();
    if (qs > 0.0) out.exponential_residual = std::fmax(out.exponential_residual, std::fabs(q) / qs);
    const double len = std::fmax(std::fabs(v), v_hi - v_lo);
    const double fs = std::fabs(f2.value()) / (len * len) + std::fabs(f2.d1()) / len;
    if (f2.d2() != 0.0)
      out.affine_residual = std::fmax(out.affine_residual, fs > 0.0 ? std::fabs(f2.d2()) / fs : HUGE_VAL);
  }
  if (f1_zero)
    out.kind = FlatCase::DegenerateF1Zero;
  else if (out.exponential_residual <= tol)
    out.kind = FlatCase::ExponentialF1;
  else if (out.affine_residual <= tol)
    out.kind = FlatCase::AffineF2;
  return out;
}

FlatClassification zero_curvature_classify(const ConstitutiveModel& model, double v_lo, double v_hi, int samples) {
  const auto prof = model.constant_cv_profile();
  if (!prof) throw UnsupportedModel("flat-case classification needs a constant-Cv model, got " + model.name());
  return zero_curvature_classify(*prof, v_lo, v_hi, samples);
}

}  // namespace thermogeo
