#include "thermogeo/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "numerics.hpp"
#include "thermogeo/dual.hpp"
#include "thermogeo/errors.hpp"

namespace thermogeo {

std::string to_string(Chart chart) {
  return chart == Chart::EntropyVolume ? "sv" : "tv";
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::IdealGas: return "ideal";
    case ModelKind::VanDerWaals: return "vdw";
    case ModelKind::Berthelot: return "berthelot";
    case ModelKind::ConstantCv: return "constant-cv";
    case ModelKind::NumericEnergy: return "numeric";
  }
  return "unknown";
}

void GasParameters::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
  };
  require(std::isfinite(a) && a >= 0.0, "parameter a must be finite and >= 0");
  require(std::isfinite(b) && b >= 0.0, "parameter b must be finite and >= 0");
  require(std::isfinite(r_gas) && r_gas > 0.0, "parameter r_gas must be finite and > 0");
  require(std::isfinite(cv0) && cv0 > 0.0, "parameter cv0 must be finite and > 0");
  require(std::isfinite(u0) && std::isfinite(s0), "reference offsets must be finite");
}

double fd_step(double x, int order) {
  static const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::fmax(std::fabs(x), 1.0);
  switch (order) {
    case 1: return scale * std::cbrt(eps);
    case 2: return scale * std::pow(eps, 0.25);
    default: return scale * std::pow(eps, 0.2);
  }
}

namespace {

// Converts a gradient in (T,V) into partials in (S,V), given (dT/dS)_V and (dT/dV)_S.
std::pair<double, double> tv_to_sv(const Dual2& g, double dt_ds, double dt_dv) {
  return {g.d1 * dt_ds, g.d2 + g.d1 * dt_dv};
}

struct CoeffDuals {
  Dual2 cv, alpha, k;
};

CoefficientPartials partials_from_tv(const CoeffDuals& c, const Coefficients& base) {
  const double dt_ds = base.t / base.cv;
  const double dt_dv = -base.t * base.alpha / (base.k * base.cv);
  CoefficientPartials out;
  std::tie(out.dcv_dS, out.dcv_dV) = tv_to_sv(c.cv, dt_ds, dt_dv);
  std::tie(out.dalpha_dS, out.dalpha_dV) = tv_to_sv(c.alpha, dt_ds, dt_dv);
  std::tie(out.dk_dS, out.dk_dV) = tv_to_sv(c.k, dt_ds, dt_dv);
  return out;
}

void check_denominator(double d, double scale, const StatePoint& s, const char* what) {
  if (!(std::fabs(d) > kDegeneracyTolerance * scale)) {
    std::ostringstream os;
    os << what << " denominator vanishes at (" << s.x1 << ", " << s.x2 << ")";
    throw SingularState(os.str(), d, s.x1, s.x2);
  }
}

ConstantCvProfile vdw_profile(const GasParameters& p) {
  const double expo = -p.r_gas / p.cv0;
  const double b = p.b, a = p.a, cv = p.cv0;
  ConstantCvProfile prof;
  prof.f1 = [b, expo](double v) { return pow(Taylor3::variable(v) - Taylor3(b), expo); };
  if (a == 0.0) {
    prof.f2 = [](double) { return Taylor3(0.0); };
  } else {
    prof.f2 = [a, cv](double v) {
      const double r = 1.0 / v;
      return Taylor3(a / cv * r, -a / cv * r * r, 2.0 * a / cv * r * r * r, -6.0 * a / cv * r * r * r * r);
    };
  }
  prof.cv = cv;
  prof.u0 = p.u0;
  prof.s0 = p.s0;
  return prof;
}

double constant_cv_entropy(const ConstantCvProfile& prof, double t, double v) {
  const double f1 = prof.f1(v).value();
  if (!(f1 > 0.0)) throw DomainError("f1 must be positive to invert T into S");
  return prof.s0 + prof.cv * std::log(prof.cv * t / f1);
}

}  // namespace

EnergyJet constant_cv_jet(const ConstantCvProfile& prof, double s, double v) {
  const Taylor3 f1 = prof.f1(v);
  const Taylor3 f2 = prof.f2(v);
  const double c = prof.cv;
  const double e = std::exp((s - prof.s0) / c);
  EnergyJet j;
  j.s = s;
  j.v = v;
  j.u = prof.u0 + f1.value() * e - c * f2.value();
  j.u_s = f1.value() * e / c;
  j.u_v = f1.d1() * e - c * f2.d1();
  j.u_ss = f1.value() * e / (c * c);
  j.u_sv = f1.d1() * e / c;
  j.u_vv = f1.d2() * e - c * f2.d2();
  j.u_sss = f1.value() * e / (c * c * c);
  j.u_ssv = f1.d1() * e / (c * c);
  j.u_svv = f1.d2() * e / c;
  j.u_vvv = f1.d3() * e - c * f2.d3();
  return j;
}

EnergyJet energy_jet_from_helmholtz(const HelmholtzJet& h) {
  const double s_t = -h.a_tt;
  const double s_v = -h.a_tv;
  const Dual2 a_tt{h.a_tt, h.a_ttt, h.a_ttv};
  const Dual2 a_tv{h.a_tv, h.a_ttv, h.a_tvv};
  const Dual2 a_vv{h.a_vv, h.a_tvv, h.a_vvv};
  const Dual2 e11 = -1.0 / a_tt;
  const Dual2 e12 = -a_tv / a_tt;
  const Dual2 e22 = a_vv - a_tv * a_tv / a_tt;
  // d/dS at constant V and d/dV at constant S of a function of (T,V).
  auto d_s = [&](const Dual2& g) { return g.d1 / s_t; };
  auto d_v = [&](const Dual2& g) { return g.d2 - (s_v / s_t) * g.d1; };

  EnergyJet j;
  j.s = -h.a_t;
  j.v = h.v;
  j.u = h.a + h.t * j.s;
  j.u_s = h.t;
  j.u_v = h.a_v;
  j.u_ss = e11.v;
  j.u_sv = e12.v;
  j.u_vv = e22.v;
  j.u_sss = d_s(e11);
  j.u_ssv = d_v(e11);
  j.u_svv = d_v(e12);
  j.u_vvv = d_v(e22);
  return j;
}

Coefficients coefficients_from_jet(const EnergyJet& j) {
  const double det = j.u_ss * j.u_vv - j.u_sv * j.u_sv;
  if (degenerate_2x2(j.u_ss, j.u_sv, j.u_vv)) {
    throw SingularState("metric is degenerate; coefficients undefined", det, j.s, j.v);
  }
  Coefficients c;
  c.v = j.v;
  c.t = j.u_s;
  c.p = -j.u_v;
  c.cv = j.u_s / j.u_ss;
  c.k = j.u_ss / (j.v * det);
  c.alpha = -j.u_sv / (j.v * det);
  c.cp = j.u_s * j.u_vv / det;
  return c;
}

CoefficientPartials coefficient_partials_from_jet(const EnergyJet& j) {
  coefficients_from_jet(j);  // singularity check
  const Dual2 t{j.u_s, j.u_ss, j.u_sv};
  const Dual2 e11{j.u_ss, j.u_sss, j.u_ssv};
  const Dual2 e12{j.u_sv, j.u_ssv, j.u_svv};
  const Dual2 e22{j.u_vv, j.u_svv, j.u_vvv};
  const Dual2 v{j.v, 0.0, 1.0};
  const Dual2 det = e11 * e22 - e12 * e12;
  const Dual2 cv = t / e11;
  const Dual2 k = e11 / (v * det);
  const Dual2 alpha = -e12 / (v * det);
  return {cv.d1, cv.d2, alpha.d1, alpha.d2, k.d1, k.d2};
}

// ---- ConstitutiveModel defaults ------------------------------------------------

void ConstitutiveModel::check_admissible(const StatePoint& s) const {
  if (!std::isfinite(s.x1) || !std::isfinite(s.x2)) throw DomainError("state coordinates must be finite");
  if (!(s.x2 > 0.0)) throw DomainError("volume must be positive");
  if (!(s.x2 > min_volume())) {
    std::ostringstream os;
    os << "volume " << s.x2 << " is not above the covolume " << min_volume();
    throw DomainError(os.str());
  }
  if (s.chart == Chart::TemperatureVolume && !(s.x1 > 0.0)) throw DomainError("temperature must be positive");
}

double ConstitutiveModel::entropy_at(double t, double v) const {
  auto f = [&](double s) { return energy_jet(StatePoint::sv(s, v)).u_s - t; };
  auto df = [&](double s) { return energy_jet(StatePoint::sv(s, v)).u_ss; };
  auto bracket = detail::expand_bracket(f, 0.0, 1.0);
  if (!bracket) throw DomainError("could not invert temperature into entropy");
  return detail::newton_bisect(f, df, bracket->first, bracket->second);
}

double ConstitutiveModel::temperature_at(double s, double v) const {
  return energy_jet(StatePoint::sv(s, v)).u_s;
}

StatePoint ConstitutiveModel::to_entropy_chart(const StatePoint& s) const {
  check_admissible(s);
  if (s.chart == Chart::EntropyVolume) return s;
  return StatePoint::sv(entropy_at(s.x1, s.x2), s.x2);
}

StatePoint ConstitutiveModel::to_temperature_chart(const StatePoint& s) const {
  check_admissible(s);
  if (s.chart == Chart::TemperatureVolume) return s;
  return StatePoint::tv(temperature_at(s.x1, s.x2), s.x2);
}

double ConstitutiveModel::pressure(const StatePoint& s) const { return energy_jet(s).pressure(); }

Coefficients ConstitutiveModel::coefficients(const StatePoint& s) const {
  return coefficients_from_jet(energy_jet(s));
}

CoefficientPartials ConstitutiveModel::coefficient_partials(const StatePoint& s) const {
  return coefficient_partials_from_jet(energy_jet(s));
}

double ConstitutiveModel::isothermal_dp_dv(const StatePoint& s) const {
  const EnergyJet j = energy_jet(s);
  return -(j.u_ss * j.u_vv - j.u_sv * j.u_sv) / j.u_ss;
}

// ---- IdealGas ------------------------------------------------------------------

IdealGas::IdealGas(GasParameters p) : p_(p) {
  p_.a = 0.0;
  p_.b = 0.0;
  p_.validate();
}

std::optional<ConstantCvProfile> IdealGas::constant_cv_profile() const { return vdw_profile(p_); }

EnergyJet IdealGas::energy_jet(const StatePoint& s) const {
  const StatePoint e = to_entropy_chart(s);
  return constant_cv_jet(vdw_profile(p_), e.x1, e.x2);
}

double IdealGas::entropy_at(double t, double v) const { return constant_cv_entropy(vdw_profile(p_), t, v); }

double IdealGas::pressure(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  return p_.r_gas * tv.x1 / tv.x2;
}

Coefficients IdealGas::coefficients(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2;
  Coefficients c;
  c.v = v;
  c.t = t;
  c.p = p_.r_gas * t / v;
  c.cv = p_.cv0;
  c.cp = p_.cv0 + p_.r_gas;
  c.alpha = 1.0 / t;
  c.k = 1.0 / c.p;
  return c;
}

CoefficientPartials IdealGas::coefficient_partials(const StatePoint& s) const {
  const Coefficients base = coefficients(s);
  const Dual2 t = Dual2::var1(base.t), v = Dual2::var2(base.v);
  CoeffDuals d{Dual2(p_.cv0), 1.0 / t, v / (p_.r_gas * t)};
  return partials_from_tv(d, base);
}

double IdealGas::isothermal_dp_dv(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  return -p_.r_gas * tv.x1 / (tv.x2 * tv.x2);
}

// ---- VanDerWaals ---------------------------------------------------------------

VanDerWaals::VanDerWaals(GasParameters p) : p_(p) { p_.validate(); }

std::optional<ConstantCvProfile> VanDerWaals::constant_cv_profile() const { return vdw_profile(p_); }

EnergyJet VanDerWaals::energy_jet(const StatePoint& s) const {
  const StatePoint e = to_entropy_chart(s);
  return constant_cv_jet(vdw_profile(p_), e.x1, e.x2);
}

double VanDerWaals::entropy_at(double t, double v) const { return constant_cv_entropy(vdw_profile(p_), t, v); }

double VanDerWaals::pressure(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2;
  return p_.r_gas * t / (v - p_.b) - p_.a / (v * v);
}

namespace {

template <class T>
CoeffDuals vdw_coefficients(const GasParameters& p, const T& t, const T& v) {
  const T vb = v - p.b;
  const T den = p.r_gas * t * v * v * v - 2.0 * p.a * vb * vb;
  return {T(p.cv0), p.r_gas * v * v * vb / den, v * v * vb * vb / den};
}

template <class T>
CoeffDuals berthelot_coefficients(const GasParameters& p, const T& t, const T& v) {
  const T vb = v - p.b;
  const T den = p.r_gas * t * t * v * v * v - 2.0 * p.a * vb * vb;
  const T cv = p.cv0 + 2.0 * p.a / (v * t * t);
  const T alpha = vb * (p.r_gas * t * t * v * v + p.a * vb) / (t * den);
  const T k = t * v * v * vb * vb / den;
  return {cv, alpha, k};
}

}  // namespace

Coefficients VanDerWaals::coefficients(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2, vb = v - p_.b;
  const double lead = p_.r_gas * t * v * v * v, corr = 2.0 * p_.a * vb * vb;
  check_denominator(lead - corr, std::fmax(lead, corr), s, "van der Waals coefficient");
  const CoeffDuals d = vdw_coefficients(p_, t, v);
  Coefficients c;
  c.v = v;
  c.t = t;
  c.p = p_.r_gas * t / vb - p_.a / (v * v);
  c.cv = p_.cv0;
  c.alpha = d.alpha.v;
  c.k = d.k.v;
  c.cp = c.cv + v * t * c.alpha * c.alpha / c.k;
  return c;
}

CoefficientPartials VanDerWaals::coefficient_partials(const StatePoint& s) const {
  const Coefficients base = coefficients(s);
  return partials_from_tv(vdw_coefficients(p_, Dual2::var1(base.t), Dual2::var2(base.v)), base);
}

double VanDerWaals::isothermal_dp_dv(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2, vb = v - p_.b;
  return -p_.r_gas * t / (vb * vb) + 2.0 * p_.a / (v * v * v);
}

// ---- Berthelot -----------------------------------------------------------------

Berthelot::Berthelot(GasParameters p) : p_(p) { p_.validate(); }

HelmholtzJet Berthelot::helmholtz_jet(double t, double v) const {
  const double a = p_.a, r = p_.r_gas, c0 = p_.cv0;
  const double vb = v - p_.b;
  HelmholtzJet h;
  h.t = t;
  h.v = v;
  h.a = p_.u0 - t * p_.s0 - r * t * std::log(vb) - a / (t * v) - c0 * t * std::log(t) + c0 * t;
  h.a_t = -p_.s0 - r * std::log(vb) + a / (t * t * v) - c0 * std::log(t);
  h.a_v = -r * t / vb + a / (t * v * v);
  h.a_tt = -2.0 * a / (t * t * t * v) - c0 / t;
  h.a_tv = -r / vb - a / (t * t * v * v);
  h.a_vv = r * t / (vb * vb) - 2.0 * a / (t * v * v * v);
  h.a_ttt = 6.0 * a / (t * t * t * t * v) + c0 / (t * t);
  h.a_ttv = 2.0 * a / (t * t * t * v * v);
  h.a_tvv = r / (vb * vb) + 2.0 * a / (t * t * v * v * v);
  h.a_vvv = -2.0 * r * t / (vb * vb * vb) + 6.0 * a / (t * v * v * v * v);
  return h;
}

EnergyJet Berthelot::energy_jet(const StatePoint& s) const {
  check_admissible(s);
  if (s.chart == Chart::TemperatureVolume) return energy_jet_from_helmholtz(helmholtz_jet(s.x1, s.x2));
  EnergyJet j = energy_jet_from_helmholtz(helmholtz_jet(temperature_at(s.x1, s.x2), s.x2));
  j.s = s.x1;
  return j;
}

double Berthelot::entropy_at(double t, double v) const {
  return p_.s0 + p_.r_gas * std::log(v - p_.b) - p_.a / (t * t * v) + p_.cv0 * std::log(t);
}

double Berthelot::temperature_at(double s, double v) const {
  // S is increasing and concave in ln T, so Newton in ln T is well behaved.
  auto f = [&](double lt) { return entropy_at(std::exp(lt), v) - s; };
  auto df = [&](double lt) {
    const double t = std::exp(lt);
    return p_.cv0 + 2.0 * p_.a / (v * t * t);
  };
  auto bracket = detail::expand_bracket(f, 0.0, 1.0, 12);
  if (!bracket) throw DomainError("entropy outside the representable temperature range");
  return std::exp(detail::newton_bisect(f, df, bracket->first, bracket->second));
}

double Berthelot::pressure(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2;
  return p_.r_gas * t / (v - p_.b) - p_.a / (t * v * v);
}

Coefficients Berthelot::coefficients(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2, vb = v - p_.b;
  const double lead = p_.r_gas * t * t * v * v * v, corr = 2.0 * p_.a * vb * vb;
  check_denominator(lead - corr, std::fmax(lead, corr), s, "Berthelot coefficient");
  const CoeffDuals d = berthelot_coefficients(p_, t, v);
  Coefficients c;
  c.v = v;
  c.t = t;
  c.p = p_.r_gas * t / vb - p_.a / (t * v * v);
  c.cv = d.cv.v;
  c.alpha = d.alpha.v;
  c.k = d.k.v;
  c.cp = c.cv + v * t * c.alpha * c.alpha / c.k;
  return c;
}

CoefficientPartials Berthelot::coefficient_partials(const StatePoint& s) const {
  const Coefficients base = coefficients(s);
  return partials_from_tv(berthelot_coefficients(p_, Dual2::var1(base.t), Dual2::var2(base.v)), base);
}

double Berthelot::isothermal_dp_dv(const StatePoint& s) const {
  const StatePoint tv = to_temperature_chart(s);
  const double t = tv.x1, v = tv.x2, vb = v - p_.b;
  return -p_.r_gas * t / (vb * vb) + 2.0 * p_.a / (t * v * v * v);
}

// ---- ConstantCv ----------------------------------------------------------------

ConstantCv::ConstantCv(Profile f1, Profile f2, double cv, double u0, double v_min) : v_min_(v_min) {
  if (!f1 || !f2) throw DomainError("constant-cv model needs both f1 and f2");
  if (!(std::isfinite(cv) && cv > 0.0)) throw DomainError("cv must be finite and > 0");
  profile_.f1 = std::move(f1);
  profile_.f2 = std::move(f2);
  profile_.cv = cv;
  profile_.u0 = u0;
}

EnergyJet ConstantCv::energy_jet(const StatePoint& s) const {
  const StatePoint e = to_entropy_chart(s);
  return constant_cv_jet(profile_, e.x1, e.x2);
}

double ConstantCv::entropy_at(double t, double v) const { return constant_cv_entropy(profile_, t, v); }

// ---- NumericEnergy -------------------------------------------------------------

NumericEnergy::NumericEnergy(EnergyFn u, double v_min) : u_(std::move(u)), v_min_(v_min) {
  if (!u_) throw DomainError("numeric energy needs a callable");
}

NumericEnergy::NumericEnergy(EnergyFn u, JetFn analytic, double v_min)
    : u_(std::move(u)), analytic_(std::move(analytic)), v_min_(v_min) {
  if (!u_ || !analytic_) throw DomainError("numeric energy needs callables");
}

EnergyJet NumericEnergy::energy_jet(const StatePoint& s) const {
  const StatePoint e = to_entropy_chart(s);
  if (analytic_) {
    EnergyJet j = analytic_(e.x1, e.x2);
    j.s = e.x1;
    j.v = e.x2;
    return j;
  }
  return fd_jet(e.x1, e.x2);
}

EnergyJet NumericEnergy::fd_jet(double s, double v) const {
  auto u = [&](double ds, double dv) { return u_(s + ds, v + dv); };
  EnergyJet j;
  j.s = s;
  j.v = v;
  j.u = u(0, 0);

  const double s1 = fd_step(s, 1), v1 = fd_step(v, 1);
  j.u_s = (u(s1, 0) - u(-s1, 0)) / (2 * s1);
  j.u_v = (u(0, v1) - u(0, -v1)) / (2 * v1);

  const double s2 = fd_step(s, 2), v2 = fd_step(v, 2);
  j.u_ss = (u(s2, 0) - 2 * j.u + u(-s2, 0)) / (s2 * s2);
  j.u_vv = (u(0, v2) - 2 * j.u + u(0, -v2)) / (v2 * v2);
  j.u_sv = (u(s2, v2) - u(s2, -v2) - u(-s2, v2) + u(-s2, -v2)) / (4 * s2 * v2);

  const double s3 = fd_step(s, 3), v3 = fd_step(v, 3);
  j.u_sss = (u(2 * s3, 0) - 2 * u(s3, 0) + 2 * u(-s3, 0) - u(-2 * s3, 0)) / (2 * s3 * s3 * s3);
  j.u_vvv = (u(0, 2 * v3) - 2 * u(0, v3) + 2 * u(0, -v3) - u(0, -2 * v3)) / (2 * v3 * v3 * v3);
  auto second_s = [&](double dv) { return u(s3, dv) - 2 * u(0, dv) + u(-s3, dv); };
  auto second_v = [&](double ds) { return u(ds, v3) - 2 * u(ds, 0) + u(ds, -v3); };
  j.u_ssv = (second_s(v3) - second_s(-v3)) / (2 * s3 * s3 * v3);
  j.u_svv = (second_v(s3) - second_v(-s3)) / (2 * s3 * v3 * v3);
  return j;
}

std::shared_ptr<NumericEnergy> numeric_wrapper(ModelPtr model) {
  auto fn = [model](double s, double v) { return model->energy_jet(StatePoint::sv(s, v)).u; };
  return std::make_shared<NumericEnergy>(fn, model->min_volume());
}

// ---- free functions ------------------------------------------------------------

double energy(const ConstitutiveModel& model, const StatePoint& s) { return model.energy_jet(s).u; }

std::pair<double, double> first_derivatives(const ConstitutiveModel& model, const StatePoint& s) {
  if (s.chart == Chart::TemperatureVolume) {
    model.check_admissible(s);
    return {s.x1, model.pressure(s)};
  }
  const EnergyJet j = model.energy_jet(s);
  return {j.temperature(), j.pressure()};
}

Coefficients coefficients(const ConstitutiveModel& model, const StatePoint& s) { return model.coefficients(s); }

CoefficientPartials coefficient_partials(const ConstitutiveModel& model, const StatePoint& s) {
  return model.coefficient_partials(s);
}

double vdw_entropy(const GasParameters& p, double u, double v) {
  const double inner = u - p.u0 + p.a / v;
  if (!(v > p.b) || !(v > 0.0)) throw DomainError("vdw_entropy requires V > b");
  if (!(inner > 0.0)) throw DomainError("vdw_entropy requires U - u0 + a/V > 0");
  return p.s0 + p.r_gas * std::log(v - p.b) + p.cv0 * std::log(inner);
}

}  // namespace thermogeo
