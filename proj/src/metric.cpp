#include "thermogeo/metric.hpp"

#include <cmath>
#include <sstream>

#include "thermogeo/dual.hpp"
#include "thermogeo/errors.hpp"

namespace thermogeo {

double MetricTensor2::deriv(int i, int j, int k) const {
  const int slot = (i == 0 && j == 0) ? 0 : ((i == 1 && j == 1) ? 4 : 2);
  return d[static_cast<std::size_t>(slot + k)];
}

MetricTensor2 MetricTensor2::from_potential(double h11, double h12, double h22, double t111, double t112,
                                            double t122, double t222, MetricChart chart) {
  MetricTensor2 m;
  m.e11 = h11;
  m.e12 = h12;
  m.e22 = h22;
  m.d = {t111, t112, t112, t122, t122, t222};
  m.chart = chart;
  return m;
}

MetricTensor2 MetricTensor2::from_energy_jet(const EnergyJet& j) {
  return from_potential(j.u_ss, j.u_sv, j.u_vv, j.u_sss, j.u_ssv, j.u_svv, j.u_vvv, MetricChart::EntropyVolume);
}

MetricTensor2 MetricTensor2::scaled(double c) const {
  MetricTensor2 m = *this;
  m.e11 *= c;
  m.e12 *= c;
  m.e22 *= c;
  for (double& x : m.d) x *= c;
  return m;
}

MetricTensor2 MetricTensor2::swapped() const {
  MetricTensor2 m = *this;
  m.e11 = e22;
  m.e22 = e11;
  m.d = {d[5], d[4], d[3], d[2], d[1], d[0]};
  return m;
}

double hessian_closure_residual(const MetricTensor2& m) {
  return std::fmax(std::fabs(m.d[1] - m.d[2]), std::fabs(m.d[3] - m.d[4]));
}

MetricTensor2 weinhold_metric(const ConstitutiveModel& model, const StatePoint& s) {
  return MetricTensor2::from_energy_jet(model.energy_jet(s));
}

std::array<double, 3> weinhold_entries_from_coefficients(const Coefficients& c) {
  return {c.t / c.cv, -c.t * c.alpha / (c.k * c.cv), c.cp / (c.v * c.k * c.cv)};
}

MetricTensor2 ruppeiner_metric_from_jet(const EnergyJet& j) {
  const Dual2 t{j.u_s, j.u_ss, j.u_sv};
  const Dual2 p{-j.u_v, -j.u_sv, -j.u_vv};
  const Dual2 e11{j.u_ss, j.u_sss, j.u_ssv};
  const Dual2 e12{j.u_sv, j.u_ssv, j.u_svv};
  const Dual2 e22{j.u_vv, j.u_svv, j.u_vvv};
  const Dual2 t2 = t * t, t3 = t2 * t;
  const Dual2 suu = -e11 / t3;
  const Dual2 suv = -(e12 + p * e11 / t) / t2;
  const Dual2 svv = -e22 / t - 2.0 * p * e12 / t2 - p * p * e11 / t3;
  // d/dU at constant V and d/dV at constant U, from (S,V) partials.
  const double ratio = p.v / t.v;
  auto d_u = [&](const Dual2& g) { return g.d1 / t.v; };
  auto d_v = [&](const Dual2& g) { return g.d2 + ratio * g.d1; };
  MetricTensor2 m;
  m.e11 = suu.v;
  m.e12 = suv.v;
  m.e22 = svv.v;
  m.d = {d_u(suu), d_v(suu), d_u(suv), d_v(suv), d_u(svv), d_v(svv)};
  m.chart = MetricChart::EnergyVolume;
  return m;
}

MetricTensor2 ruppeiner_metric(const ConstitutiveModel& model, const StatePoint& s) {
  const Coefficients c = model.coefficients(s);
  if (!(c.t > 0.0)) throw DomainError("Ruppeiner metric requires T > 0");
  MetricTensor2 m = ruppeiner_metric_from_jet(model.energy_jet(s));
  const double w = (c.t * c.alpha - c.k * c.p);
  m.e11 = -1.0 / (c.cv * c.t * c.t);
  m.e12 = w / (c.t * c.t * c.k * c.cv);
  const double q = w / (c.t * c.k);
  m.e22 = -q * q / c.cv - 1.0 / (c.v * c.k * c.t);
  return m;
}

DeterminantReport determinant_report(const ConstitutiveModel& model, const StatePoint& s) {
  const EnergyJet j = model.energy_jet(s);
  DeterminantReport r;
  r.det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
  r.scale = std::fabs(j.u_ss * j.u_vv) + j.u_sv * j.u_sv;
  const StatePoint st = StatePoint::sv(j.s, j.v);
  const Coefficients c = model.coefficients(st);
  r.residual_kvc = r.det - c.t / (c.k * c.v * c.cv);
  r.residual_dpdv = r.det + (c.t / c.cv) * model.isothermal_dp_dv(st);
  if (auto prof = model.constant_cv_profile()) {
    const Taylor3 f1 = prof->f1(j.v), f2 = prof->f2(j.v);
    const double cv = prof->cv;
    const double e = std::exp((j.s - prof->s0) / cv);
    r.det_ideal_part = e * e / (cv * cv) * (f1.value() * f1.d2() - f1.d1() * f1.d1());
    r.det_correction = e * f1.value() * f2.d2() / cv;
    r.residual_split = r.det - (*r.det_ideal_part - *r.det_correction);
  }
  return r;
}

Sym2 inverse_metric(const ConstitutiveModel& model, const StatePoint& s) {
  const Coefficients c = model.coefficients(s);
  return {c.cp / c.t, c.v * c.alpha, c.k * c.v};
}

Sym2 inverse_entries(const MetricTensor2& m) {
  const double det = m.det();
  if (degenerate_2x2(m.e11, m.e12, m.e22)) throw SingularState("metric is degenerate; no inverse", det, 0, 0);
  return {m.e22 / det, -m.e12 / det, m.e11 / det};
}

std::string to_string(Signature s) {
  switch (s) {
    case Signature::PositiveDefinite: return "positive-definite";
    case Signature::NegativeDefinite: return "negative-definite";
    case Signature::Indefinite: return "indefinite";
    case Signature::Degenerate: return "degenerate";
  }
  return "unknown";
}

SignatureClass eigen_signature(const MetricTensor2& m) {
  SignatureClass out;
  const double tr = m.e11 + m.e22;
  const double diff = m.e11 - m.e22;
  out.discriminant = diff * diff + 4.0 * m.e12 * m.e12;
  const double root = std::sqrt(out.discriminant);
  const double det = m.det();
  // Avoid cancellation: compute the larger-magnitude root first.
  if (tr >= 0.0) {
    out.lambda_plus = 0.5 * (tr + root);
    out.lambda_minus = out.lambda_plus != 0.0 ? det / out.lambda_plus : 0.0;
  } else {
    out.lambda_minus = 0.5 * (tr - root);
    out.lambda_plus = det / out.lambda_minus;
  }
  if (degenerate_2x2(m.e11, m.e12, m.e22)) {
    out.cls = Signature::Degenerate;
  } else if (det < 0.0) {
    out.cls = Signature::Indefinite;
  } else {
    out.cls = tr > 0.0 ? Signature::PositiveDefinite : Signature::NegativeDefinite;
  }
  return out;
}

SignatureClass eigen_signature(const MetricTensor2& m, const Coefficients& c) {
  SignatureClass out = eigen_signature(m);
  if (out.cls == Signature::Degenerate) {
    out.from_response = Signature::Degenerate;
    return out;
  }
  const double dp_dv = -1.0 / (c.k * c.v);
  if (c.cv > 0.0 && dp_dv < 0.0) {
    out.from_response = Signature::PositiveDefinite;
  } else if (c.cv < 0.0 && dp_dv > 0.0) {
    out.from_response = Signature::NegativeDefinite;
  } else {
    out.from_response = Signature::Indefinite;
  }
  return out;
}

IdentityResiduals identity_residuals(const ConstitutiveModel& model, const StatePoint& s) {
  const Coefficients c = model.coefficients(s);
  const CoefficientPartials d = model.coefficient_partials(s);
  IdentityResiduals r;
  {
    const double terms[] = {d.dcv_dV, c.alpha / c.k * d.dcv_dS, -c.cv / c.k * d.dalpha_dS,
                            c.cv * c.alpha / (c.k * c.k) * d.dk_dS};
    r.id1 = terms[0] + terms[1] + terms[2] + terms[3];
    for (double t : terms) r.id1_scale += std::fabs(t);
  }
  {
    const double terms[] = {d.dk_dV, -c.k * d.dalpha_dV / c.alpha, -d.dalpha_dS,
                            (c.alpha / c.k + c.cv / (c.t * c.v * c.alpha)) * d.dk_dS};
    r.id2 = terms[0] + terms[1] + terms[2] + terms[3];
    for (double t : terms) r.id2_scale += std::fabs(t);
  }
  if (model.has_constant_cv()) {
    const double ratio = d.dalpha_dS / d.dk_dS;
    r.id3 = ratio - c.alpha / c.k;
    r.id3_scale = std::fabs(ratio) + std::fabs(c.alpha / c.k);
  }
  r.cp_cv = c.cp - c.cv - c.v * c.t * c.alpha * c.alpha / c.k;
  r.cp_cv_scale = std::fabs(c.cp);
  return r;
}

SoundSpeeds speed_of_sound(const ConstitutiveModel& model, const StatePoint& s, double rho) {
  if (!(rho > 0.0)) throw DomainError("density must be positive");
  const EnergyJet j = model.energy_jet(s);
  const double det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
  if (!(det > 0.0)) throw DomainError("speed of sound needs a positive-definite metric (det > 0)");
  const Coefficients c = model.coefficients(s);
  return {std::sqrt(c.v * c.cp * det / (c.t * rho)), std::sqrt(c.v * c.cv * det / (c.t * rho))};
}

double delta_measure(const ConstitutiveModel& model, const StatePoint& s) {
  const auto prof = model.constant_cv_profile();
  if (!prof) throw UnsupportedModel("delta measure needs a constant-Cv model, got " + model.name());
  const EnergyJet j = model.energy_jet(s);
  return j.u_svv - j.u_vv / prof->cv;
}

}  // namespace thermogeo
