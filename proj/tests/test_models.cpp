#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <memory>

#include "support.hpp"
#include "thermogeo/dual.hpp"
#include "thermogeo/errors.hpp"
#include "thermogeo/models.hpp"

using namespace thermogeo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testsupport::rel;
using testsupport::unit_gas;

namespace {

// ConstantCv with f1 = (V-1)^(-2/3) and f2 = 1/(1.5 V): the unit vdW gas written by hand.
std::shared_ptr<ConstantCv> handmade_vdw() {
  Profile f1 = [](double v) { return pow(Taylor3::variable(v) - Taylor3(1.0), -1.0 / 1.5); };
  Profile f2 = [](double v) { return Taylor3(1.0 / 1.5) / Taylor3::variable(v); };
  return std::make_shared<ConstantCv>(f1, f2, 1.5, 0.0, 1.0);
}

std::array<double, 10> jet_array(const EnergyJet& j) {
  return {j.u, j.u_s, j.u_v, j.u_ss, j.u_sv, j.u_vv, j.u_sss, j.u_ssv, j.u_svv, j.u_vvv};
}

}  // namespace

TEST_CASE("energy examples") {
  GasParameters p = unit_gas(0, 0, 1.0);
  IdealGas ideal(p);
  REQUIRE_THAT(energy(ideal, StatePoint::sv(0, 1)), WithinRel(1.0, 1e-15));

  // vdW with b = 0 is the ideal gas minus a/V.
  IdealGas ideal15(unit_gas(0, 0));
  VanDerWaals vdw(unit_gas(1.0, 0.0));
  for (double s : {-0.7, 0.2, 1.9}) {
    for (double v : {0.5, 2.0, 7.0}) {
      const StatePoint st = StatePoint::sv(s, v);
      REQUIRE_THAT(energy(vdw, st), WithinRel(energy(ideal15, st) - 1.0 / v, 1e-14));
    }
  }
}

TEST_CASE("constant-cv energy solves the entropy ODE") {
  // U_SS = U_S / cv at fixed V, integrated with classical RK4 from S = 0.
  auto model = handmade_vdw();
  const double v = 2.6, s_end = 1.3;
  const EnergyJet start = model->energy_jet(StatePoint::sv(0.0, v));
  double u = start.u, du = start.u_s;
  const int n = 2000;
  const double h = s_end / n;
  auto rhs = [](double, double y1) { return y1 / 1.5; };
  for (int i = 0; i < n; ++i) {
    const double k1u = du, k1d = rhs(u, du);
    const double k2u = du + 0.5 * h * k1d, k2d = rhs(u + 0.5 * h * k1u, du + 0.5 * h * k1d);
    const double k3u = du + 0.5 * h * k2d, k3d = rhs(u + 0.5 * h * k2u, du + 0.5 * h * k2d);
    const double k4u = du + h * k3d, k4d = rhs(u + h * k3u, du + h * k3d);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  REQUIRE_THAT(energy(*model, StatePoint::sv(s_end, v)), WithinRel(u, 1e-12));
}

TEST_CASE("first derivatives") {
  VanDerWaals vdw(unit_gas(1, 1));
  auto [t, p] = first_derivatives(vdw, StatePoint::tv(1.0, 2.0));
  REQUIRE(t == 1.0);
  REQUIRE_THAT(p, WithinRel(0.75, 1e-15));

  // Same state through the (S,V) chart.
  const StatePoint sv = vdw.to_entropy_chart(StatePoint::tv(1.0, 2.0));
  auto [t2, p2] = first_derivatives(vdw, sv);
  REQUIRE_THAT(t2, WithinRel(1.0, 1e-14));
  REQUIRE_THAT(p2, WithinRel(0.75, 1e-14));

  // Constant-cv state equation p = -cv T f1'/f1 + cv f2'.
  auto model = handmade_vdw();
  const auto prof = *model->constant_cv_profile();
  const StatePoint st = StatePoint::sv(0.4, 3.1);
  const auto f1 = prof.f1(3.1), f2 = prof.f2(3.1);
  auto [t3, p3] = first_derivatives(*model, st);
  REQUIRE_THAT(p3, WithinRel(-1.5 * t3 * f1.d1() / f1.value() + 1.5 * f2.d1(), 1e-14));

  // Finite-difference wrapper around the ideal gas.
  auto ideal = std::make_shared<IdealGas>(unit_gas(0, 0));
  auto numeric = numeric_wrapper(ideal);
  const StatePoint q = StatePoint::sv(0.9, 2.2);
  auto [ta, pa] = first_derivatives(*ideal, q);
  auto [tn, pn] = first_derivatives(*numeric, q);
  REQUIRE_THAT(tn, WithinRel(ta, 1e-9));
  REQUIRE_THAT(pn, WithinRel(pa, 1e-9));
}

TEST_CASE("coefficients of the named models") {
  IdealGas ideal(unit_gas(0, 0));
  const Coefficients ci = coefficients(ideal, StatePoint::tv(1.7, 2.3));
  REQUIRE_THAT(ci.alpha, WithinRel(1 / 1.7, 1e-15));
  REQUIRE_THAT(ci.k, WithinRel(1 / ci.p, 1e-15));

  Berthelot bert(unit_gas(1, 1));
  const Coefficients cb = coefficients(bert, StatePoint::tv(1.0, 3.0));
  REQUIRE_THAT(cb.cv, WithinRel(1.5 + 2.0 / 3.0, 1e-15));
  // alpha/k = R/(V-b) + a/(T^2 V^2)
  REQUIRE_THAT(cb.alpha / cb.k, WithinRel(1.0 / 2.0 + 1.0 / 9.0, 1e-14));

  VanDerWaals vdw(unit_gas(1, 1));
  const Coefficients cv = coefficients(vdw, StatePoint::tv(2.0, 3.0));
  REQUIRE_THAT(cv.alpha, WithinRel(cv.k / 2.0, 1e-14));  // alpha = R k/(V-b)

  const double v = 2.5, t = 2.0 * (v - 1) * (v - 1) / (v * v * v);
  REQUIRE_THROWS_AS(coefficients(vdw, StatePoint::tv(t, v)), SingularState);
  const double tb = std::sqrt(t);
  REQUIRE_THROWS_AS(coefficients(bert, StatePoint::tv(tb, v)), SingularState);
}

TEST_CASE("generic coefficients from the energy jet match closed forms") {
  using testsupport::Region;
  std::vector<std::pair<std::shared_ptr<ConstitutiveModel>, bool>> models = {
      {std::make_shared<IdealGas>(unit_gas(0, 0)), false},
      {std::make_shared<VanDerWaals>(unit_gas(1.3, 0.7)), false},
      {std::make_shared<Berthelot>(unit_gas(1.1, 0.6)), true}};
  for (auto& [m, bert] : models) {
    const GasParameters p = bert ? static_cast<const Berthelot&>(*m).parameters()
                                 : (m->kind() == ModelKind::IdealGas
                                        ? static_cast<const IdealGas&>(*m).parameters()
                                        : static_cast<const VanDerWaals&>(*m).parameters());
    for (const StatePoint& st : testsupport::random_states(p, bert, 40, 11, Region::Either)) {
      const Coefficients a = m->coefficients(st);
      const Coefficients g = coefficients_from_jet(m->energy_jet(st));
      REQUIRE(rel(a.p, g.p) < 1e-12);
      REQUIRE(rel(a.cv, g.cv) < 1e-12);
      REQUIRE(rel(a.cp, g.cp) < 1e-10);
      REQUIRE(rel(a.alpha, g.alpha) < 1e-10);
      REQUIRE(rel(a.k, g.k) < 1e-10);
      const CoefficientPartials pa = m->coefficient_partials(st);
      const CoefficientPartials pg = coefficient_partials_from_jet(m->energy_jet(st));
      const double kscale = std::fabs(a.k) / a.v, ascale = std::fabs(a.alpha) / a.v;
      REQUIRE(rel(pa.dk_dS, pg.dk_dS, 1e-6 * kscale) < 1e-9);
      REQUIRE(rel(pa.dk_dV, pg.dk_dV, 1e-6 * kscale) < 1e-9);
      REQUIRE(rel(pa.dalpha_dS, pg.dalpha_dS, 1e-6 * ascale) < 1e-9);
      REQUIRE(rel(pa.dalpha_dV, pg.dalpha_dV, 1e-6 * ascale) < 1e-9);
      REQUIRE(rel(pa.dcv_dS, pg.dcv_dS, 1e-6) < 1e-9);
      REQUIRE(rel(pa.dcv_dV, pg.dcv_dV, 1e-6 * a.cv / a.v) < 1e-9);
    }
  }
}

TEST_CASE("coefficient partials") {
  VanDerWaals vdw(unit_gas(1, 1));
  const StatePoint st = vdw.to_entropy_chart(StatePoint::tv(1.2, 3.4));
  const CoefficientPartials d = coefficient_partials(vdw, st);
  REQUIRE(d.dcv_dS == 0.0);
  REQUIRE(d.dcv_dV == 0.0);

  // dk/dS against a central difference of coefficients() in S.
  const double h = fd_step(st.x1, 1);
  const double kp = coefficients(vdw, StatePoint::sv(st.x1 + h, st.x2)).k;
  const double km = coefficients(vdw, StatePoint::sv(st.x1 - h, st.x2)).k;
  REQUIRE(rel(d.dk_dS, (kp - km) / (2 * h)) < 1e-8);
  const double hv = fd_step(st.x2, 1);
  const double kvp = coefficients(vdw, StatePoint::sv(st.x1, st.x2 + hv)).k;
  const double kvm = coefficients(vdw, StatePoint::sv(st.x1, st.x2 - hv)).k;
  REQUIRE(rel(d.dk_dV, (kvp - kvm) / (2 * hv)) < 1e-8);

  Berthelot bert(unit_gas(1, 0));
  const Coefficients c = coefficients(bert, StatePoint::tv(1, 1));
  REQUIRE_THAT(c.cv, WithinRel(3.5, 1e-15));
  const CoefficientPartials db = coefficient_partials(bert, StatePoint::tv(1, 1));
  REQUIRE_THAT(db.dcv_dS, WithinRel(-4.0 / 3.5, 1e-14));
}

TEST_CASE("vdw entropy inverts the energy") {
  REQUIRE_THAT(vdw_entropy(unit_gas(0, 0, 1.0), 1.0, 1.0), WithinAbs(0.0, 1e-15));
  // U + a/V = e and V - b = 1 with cv = R = 1: S = ln(1) + ln(e) = 1.
  const GasParameters p = unit_gas(1, 1, 1.0);
  const double v = 2.0, u = std::exp(1.0) - 0.5;
  REQUIRE_THAT(vdw_entropy(p, u, v), WithinRel(1.0, 1e-15));
  REQUIRE_THROWS_AS(vdw_entropy(p, -5.0, v), DomainError);
  REQUIRE_THROWS_AS(vdw_entropy(p, 1.0, 0.9), DomainError);

  GasParameters q = unit_gas(1.3, 0.7);
  q.s0 = 0.4;
  q.u0 = -0.2;
  VanDerWaals vdw(q);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(-2.0, 2.0), uv(0.8, 9.0);
  for (int i = 0; i < 20; ++i) {
    const double s = us(rng), vv = uv(rng);
    const double back = vdw_entropy(q, energy(vdw, StatePoint::sv(s, vv)), vv);
    REQUIRE(std::fabs(back - s) < 1e-12 * std::fmax(1.0, std::fabs(s)));
  }
}

TEST_CASE("analytic partials match finite differences of the next order") {
  std::vector<std::pair<std::shared_ptr<ConstitutiveModel>, GasParameters>> models;
  models.emplace_back(std::make_shared<IdealGas>(unit_gas(0, 0)), unit_gas(0, 0));
  models.emplace_back(std::make_shared<VanDerWaals>(unit_gas(1.3, 0.7)), unit_gas(1.3, 0.7));
  models.emplace_back(std::make_shared<Berthelot>(unit_gas(1.1, 0.6)), unit_gas(1.1, 0.6));
  models.emplace_back(handmade_vdw(), unit_gas(1, 1));
  auto ideal = std::make_shared<IdealGas>(unit_gas(0, 0));
  models.emplace_back(std::make_shared<NumericEnergy>(
                          [ideal](double s, double v) { return energy(*ideal, StatePoint::sv(s, v)); },
                          [ideal](double s, double v) { return ideal->energy_jet(StatePoint::sv(s, v)); }),
                      unit_gas(0, 0));

  for (auto& [m, p] : models) {
    const bool bert = m->kind() == ModelKind::Berthelot;
    for (const StatePoint& tv : testsupport::random_states(p, bert, 50, 3, testsupport::Region::Either)) {
      const StatePoint st = m->to_entropy_chart(tv);
      const double s = st.x1, v = st.x2;
      auto jet = [&](double ds, double dv) { return m->energy_jet(StatePoint::sv(s + ds, v + dv)); };
      const EnergyJet j = jet(0, 0);
      const double hs = fd_step(s, 1), hv = fd_step(v, 1);
      const EnergyJet sp = jet(hs, 0), sm = jet(-hs, 0), vp = jet(0, hv), vm = jet(0, -hv);
      auto ds = [&](double EnergyJet::*f) { return (sp.*f - sm.*f) / (2 * hs); };
      auto dv = [&](double EnergyJet::*f) { return (vp.*f - vm.*f) / (2 * hv); };
      // Floor each comparison at a scale typical of the derivative order.
      const double floor1 = 1e-3 * (std::fabs(j.u_s) + std::fabs(j.u_v));
      const double floor2 = 1e-3 * (std::fabs(j.u_ss) + std::fabs(j.u_vv));
      const double floor3 = 1e-3 * (std::fabs(j.u_sss) + std::fabs(j.u_vvv));
      REQUIRE(rel(j.u_s, ds(&EnergyJet::u), floor1) < 1e-6);
      REQUIRE(rel(j.u_v, dv(&EnergyJet::u), floor1) < 1e-6);
      REQUIRE(rel(j.u_ss, ds(&EnergyJet::u_s), floor2) < 1e-6);
      REQUIRE(rel(j.u_sv, dv(&EnergyJet::u_s), floor2) < 1e-6);
      REQUIRE(rel(j.u_sv, ds(&EnergyJet::u_v), floor2) < 1e-6);
      REQUIRE(rel(j.u_vv, dv(&EnergyJet::u_v), floor2) < 1e-6);
      REQUIRE(rel(j.u_sss, ds(&EnergyJet::u_ss), floor3) < 1e-6);
      REQUIRE(rel(j.u_ssv, dv(&EnergyJet::u_ss), floor3) < 1e-6);
      REQUIRE(rel(j.u_ssv, ds(&EnergyJet::u_sv), floor3) < 1e-6);
      REQUIRE(rel(j.u_svv, dv(&EnergyJet::u_sv), floor3) < 1e-6);
      REQUIRE(rel(j.u_svv, ds(&EnergyJet::u_vv), floor3) < 1e-6);
      REQUIRE(rel(j.u_vvv, dv(&EnergyJet::u_vv), floor3) < 1e-6);
    }
  }
}

TEST_CASE("mixed third partials agree in either order for the Helmholtz route") {
  Berthelot bert(unit_gas(1.1, 0.6));
  for (const StatePoint& st : testsupport::random_states(unit_gas(1.1, 0.6), true, 30, 9)) {
    const HelmholtzJet h = bert.helmholtz_jet(st.x1, st.x2);
    const Dual2 a_tt{h.a_tt, h.a_ttt, h.a_ttv}, a_tv{h.a_tv, h.a_ttv, h.a_tvv}, a_vv{h.a_vv, h.a_tvv, h.a_vvv};
    const Dual2 e11 = -1.0 / a_tt, e12 = -a_tv / a_tt, e22 = a_vv - a_tv * a_tv / a_tt;
    const double s_t = -h.a_tt, s_v = -h.a_tv;
    auto d_s = [&](const Dual2& g) { return g.d1 / s_t; };
    auto d_v = [&](const Dual2& g) { return g.d2 - s_v / s_t * g.d1; };
    REQUIRE(rel(d_v(e11), d_s(e12)) < 1e-12);
    REQUIRE(rel(d_v(e12), d_s(e22)) < 1e-12);
  }
}

TEST_CASE("Helmholtz transform reproduces the vdW energy jet") {
  // A(T,V) for the vdW gas with cv = 1.5, R = 1, a = 1.3, b = 0.7.
  const double a = 1.3, b = 0.7, c = 1.5;
  VanDerWaals vdw(unit_gas(a, b));
  for (const StatePoint& st : testsupport::random_states(unit_gas(a, b), false, 20, 4, testsupport::Region::Either)) {
    const double t = st.x1, v = st.x2, vb = v - b;
    HelmholtzJet h;
    h.t = t;
    h.v = v;
    h.a = c * t - a / v - c * t * std::log(c * t) - t * std::log(vb);
    h.a_t = -c * std::log(c * t) - std::log(vb);
    h.a_v = -t / vb + a / (v * v);
    h.a_tt = -c / t;
    h.a_tv = -1.0 / vb;
    h.a_vv = t / (vb * vb) - 2 * a / (v * v * v);
    h.a_ttt = c / (t * t);
    h.a_ttv = 0.0;
    h.a_tvv = 1.0 / (vb * vb);
    h.a_vvv = -2 * t / (vb * vb * vb) + 6 * a / (v * v * v * v);
    const auto got = jet_array(energy_jet_from_helmholtz(h));
    const auto want = jet_array(vdw.energy_jet(st));
    for (std::size_t i = 0; i < got.size(); ++i) {
      INFO("component " << i);
      REQUIRE(rel(got[i], want[i], 1e-12) < 1e-11);
    }
  }
}

TEST_CASE("named constant-cv models equal their profile form") {
  auto hand = handmade_vdw();
  VanDerWaals vdw(unit_gas(1, 1));
  Profile f1 = [](double v) { return pow(Taylor3::variable(v), -1.0 / 1.5); };
  Profile f2 = [](double) { return Taylor3(0.0); };
  ConstantCv ideal_cc(f1, f2, 1.5);
  IdealGas ideal(unit_gas(0, 0));
  for (double s : {-1.0, 0.3, 2.0}) {
    for (double v : {1.5, 3.0, 6.0}) {
      const auto a = jet_array(vdw.energy_jet(StatePoint::sv(s, v)));
      const auto b = jet_array(hand->energy_jet(StatePoint::sv(s, v)));
      const auto c = jet_array(ideal.energy_jet(StatePoint::sv(s, v)));
      const auto d = jet_array(ideal_cc.energy_jet(StatePoint::sv(s, v)));
      for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(rel(a[i], b[i]) < 1e-14);
        REQUIRE(rel(c[i], d[i]) < 1e-14);
      }
    }
  }
}

TEST_CASE("heat capacity relation and the ideal limit") {
  std::vector<std::pair<std::shared_ptr<ConstitutiveModel>, GasParameters>> models = {
      {std::make_shared<IdealGas>(unit_gas(0, 0)), unit_gas(0, 0)},
      {std::make_shared<VanDerWaals>(unit_gas(1.3, 0.7)), unit_gas(1.3, 0.7)},
      {std::make_shared<Berthelot>(unit_gas(1.1, 0.6)), unit_gas(1.1, 0.6)}};
  for (auto& [m, p] : models) {
    for (const StatePoint& st :
         testsupport::random_states(p, m->kind() == ModelKind::Berthelot, 30, 2, testsupport::Region::Either)) {
      const Coefficients c = m->coefficients(st);
      REQUIRE(std::fabs(c.cp - c.cv - c.v * c.t * c.alpha * c.alpha / c.k) / std::fabs(c.cp) < 1e-10);
    }
  }

  VanDerWaals tiny(unit_gas(1e-8, 1e-8));
  IdealGas ideal(unit_gas(0, 0));
  for (double s : {-0.5, 1.0}) {
    for (double v : {0.7, 4.0}) {
      const StatePoint st = StatePoint::sv(s, v);
      const auto a = jet_array(tiny.energy_jet(st));
      const auto b = jet_array(ideal.energy_jet(st));
      for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(rel(a[i], b[i]) < 1e-6);
      const Coefficients ca = tiny.coefficients(st), cb = ideal.coefficients(st);
      REQUIRE(rel(ca.k, cb.k) < 1e-6);
      REQUIRE(rel(ca.alpha, cb.alpha) < 1e-6);
      REQUIRE(rel(ca.cp, cb.cp) < 1e-6);
    }
  }
}

TEST_CASE("chart conversions round trip") {
  Berthelot bert(unit_gas(1.1, 0.6));
  VanDerWaals vdw(unit_gas(1.3, 0.7));
  for (const ConstitutiveModel* m : std::initializer_list<const ConstitutiveModel*>{&bert, &vdw}) {
    const StatePoint tv = StatePoint::tv(0.37, 2.9);
    const StatePoint sv = m->to_entropy_chart(tv);
    const StatePoint back = m->to_temperature_chart(sv);
    REQUIRE_THAT(back.x1, WithinRel(0.37, 1e-14));
    REQUIRE_THAT(m->energy_jet(sv).u_s, WithinRel(0.37, 1e-14));
  }
  REQUIRE_THROWS_AS(vdw.energy_jet(StatePoint::sv(0, 0.5)), DomainError);
  REQUIRE_THROWS_AS(vdw.energy_jet(StatePoint::tv(-1, 2)), DomainError);
}

TEST_CASE("parameter validation") {
  GasParameters p = unit_gas(1, 1);
  p.r_gas = 0;
  REQUIRE_THROWS_AS(VanDerWaals(p), DomainError);
  p = unit_gas(-1, 1);
  REQUIRE_THROWS_AS(Berthelot(p), DomainError);
}
