#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/errors.hpp"
#include "thermogeo/geodesics.hpp"

using namespace thermogeo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testsupport::random_states;
using testsupport::rel;
using testsupport::unit_gas;

namespace {

void require_same(const ChristoffelSet& a, const ChristoffelSet& b, double tol) {
  double scale = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) scale = std::fmax(scale, std::fabs(b(k, i, j)));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        INFO("k=" << k << " i=" << i << " j=" << j << " a=" << a(k, i, j) << " b=" << b(k, i, j));
        REQUIRE(std::fabs(a(k, i, j) - b(k, i, j)) <= tol * scale);
      }
}

std::vector<GeodesicState> launches(const ConstitutiveModel& m, const GasParameters& p, bool berthelot, int n,
                                    unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dir(0.0, 2.0 * std::acos(-1.0));
  std::vector<GeodesicState> out;
  for (const StatePoint& s : random_states(p, berthelot, n, seed, testsupport::Region::Stable, 2.0, 6.0)) {
    const double th = dir(rng);
    out.push_back(geodesic_start(m, s, 0.03 * std::cos(th), 0.05 * std::sin(th)));
  }
  return out;
}

}  // namespace

TEST_CASE("explicit Christoffel symbols match the metric route") {
  const GasParameters p = unit_gas(1.3, 0.7);
  VanDerWaals vdw(p);
  for (const StatePoint& s : random_states(p, false, 20, 11, testsupport::Region::Either)) {
    const StatePoint sv = vdw.to_entropy_chart(s);
    require_same(christoffel_elementary(vdw, sv), christoffel_from_metric(weinhold_metric(vdw, sv)), 1e-9);
  }
  Berthelot bert(unit_gas(1.1, 0.6));
  for (const StatePoint& s : random_states(bert.parameters(), true, 20, 12, testsupport::Region::Either)) {
    const StatePoint sv = bert.to_entropy_chart(s);
    require_same(christoffel_elementary(bert, sv), christoffel_from_metric(weinhold_metric(bert, sv)), 1e-9);
  }
}

TEST_CASE("constant-Cv Christoffel specialization") {
  const GasParameters p = unit_gas(1.3, 0.7, 2.5);
  VanDerWaals vdw(p);
  IdealGas ideal(p);
  for (const ConstitutiveModel* m : {static_cast<const ConstitutiveModel*>(&vdw), static_cast<const ConstitutiveModel*>(&ideal)})
    for (const StatePoint& s : random_states(p, false, 10, 5)) {
      const StatePoint sv = m->to_entropy_chart(s);
      const Coefficients c = m->coefficients(sv);
      const CoefficientPartials d = m->coefficient_partials(sv);
      const ChristoffelSet cc = christoffel_constant_cv(c, d), gen = christoffel_elementary(c, d);
      REQUIRE(cc.g111 == 1.0 / (2.0 * p.cv0));
      REQUIRE(cc.g211 == 0.0);
      REQUIRE_THAT(cc.j, WithinAbs(1.0, 0.0));
      require_same(cc, gen, 1e-12);
      // Geodesic equations of the specialization reproduce the general ones.
      const Acceleration a = geodesic_acceleration(cc, 0.3, -0.2), b = geodesic_acceleration(gen, 0.3, -0.2);
      REQUIRE(rel(a.s_ddot, b.s_ddot) < 1e-12);
      REQUIRE(rel(a.v_ddot, b.v_ddot) < 1e-12);
      const ChristoffelSet gm = christoffel_from_metric(weinhold_metric(*m, sv));
      REQUIRE_THAT(gm.g111, WithinRel(1.0 / (2.0 * p.cv0), 1e-12));
    }
  // Gamma^2_12 = (T V alpha / (2 k Cv)) F in general.
  const StatePoint sv = vdw.to_entropy_chart(StatePoint::tv(2.0, 3.0));
  const Coefficients c = vdw.coefficients(sv);
  const ChristoffelSet g = christoffel_elementary(c, vdw.coefficient_partials(sv));
  REQUIRE_THAT(g.g212, WithinRel(c.t * c.v * c.alpha / (2.0 * c.k * c.cv) * g.f, 1e-15));
}

TEST_CASE("explicit symbols are undefined on the locus") {
  const GasParameters p = unit_gas(1, 1);
  VanDerWaals vdw(p);
  const double t = testsupport::locus_temperature(p, 3.0, false);
  REQUIRE_THROWS_AS(christoffel_elementary(vdw, StatePoint::tv(t, 3.0)), SingularState);
}

TEST_CASE("zero velocity stays put") {
  IdealGas ideal(unit_gas(0, 0));
  const GeodesicState st = geodesic_start(ideal, StatePoint::tv(2.0, 3.0), 0.0, 0.0);
  const Trajectory tr = integrate_geodesic(ideal, st, 5.0);
  REQUIRE(tr.stop == GeodesicStop::Completed);
  REQUIRE(tr.steps.back().state.t == 5.0);
  REQUIRE(tr.steps.back().state.s == st.s);
  REQUIRE(tr.steps.back().state.v == st.v);
}

TEST_CASE("metric speed is conserved") {
  GeodesicOptions opt;
  opt.tol = 1e-12;
  const GasParameters p = unit_gas(1.3, 0.7);
  IdealGas ideal(p);
  VanDerWaals vdw(p);
  for (const auto* m : {static_cast<const ConstitutiveModel*>(&ideal), static_cast<const ConstitutiveModel*>(&vdw)})
    for (const GeodesicState& st : launches(*m, p, false, 10, 21)) {
      const Trajectory tr = integrate_geodesic(*m, st, 10.0, opt);
      INFO(m->name() << " s=" << st.s << " v=" << st.v << " " << tr.reason);
      REQUIRE(tr.stop == GeodesicStop::Completed);
      REQUIRE(tr.steps.back().state.t == 10.0);
      REQUIRE(tr.max_speed_drift() < 1e-8);
    }
}

TEST_CASE("both Christoffel routes give the same geodesic") {
  VanDerWaals vdw(unit_gas(1, 1));
  const GeodesicState st = geodesic_start(vdw, StatePoint::tv(1.0, 3.0), 0.02, 0.1);
  GeodesicOptions a, b;
  a.tol = b.tol = 1e-12;
  b.route = ChristoffelRoute::Metric;
  const GeodesicState ea = integrate_geodesic(vdw, st, 5.0, a).steps.back().state;
  const GeodesicState eb = integrate_geodesic(vdw, st, 5.0, b).steps.back().state;
  REQUIRE_THAT(ea.s, WithinAbs(eb.s, 1e-9));
  REQUIRE_THAT(ea.v, WithinAbs(eb.v, 1e-9));
}

TEST_CASE("affine reparameterization") {
  VanDerWaals vdw(unit_gas(1, 1));
  GeodesicState st = geodesic_start(vdw, StatePoint::tv(1.0, 3.0), 0.02, 0.1);
  GeodesicOptions opt;
  opt.tol = 1e-12;
  const GeodesicState e1 = integrate_geodesic(vdw, st, 6.0, opt).steps.back().state;
  for (double c : {0.5, 3.0}) {
    GeodesicState fast = st;
    fast.s_dot *= c;
    fast.v_dot *= c;
    const GeodesicState e2 = integrate_geodesic(vdw, fast, 6.0 / c, opt).steps.back().state;
    REQUIRE_THAT(e2.s, WithinAbs(e1.s, 1e-8));
    REQUIRE_THAT(e2.v, WithinAbs(e1.v, 1e-8));
    REQUIRE_THAT(e2.s_dot, WithinAbs(c * e1.s_dot, 1e-8));
  }
}

TEST_CASE("dense output lands on requested times") {
  IdealGas ideal(unit_gas(0, 0));
  GeodesicOptions opt;
  opt.tol = 1e-12;
  for (int i = 0; i <= 20; ++i) opt.sample_times.push_back(0.5 * i);
  const GeodesicState st = geodesic_start(ideal, StatePoint::tv(2.0, 3.0), 0.05, 0.1);
  const Trajectory tr = integrate_geodesic(ideal, st, 10.0, opt);
  REQUIRE(tr.dense.size() == 21);
  for (std::size_t i = 0; i < tr.dense.size(); ++i) REQUIRE(tr.dense[i].state.t == 0.5 * static_cast<double>(i));
  REQUIRE(tr.max_speed_drift() < 1e-8);
  // Compare an interpolated point with a direct integration to that time.
  const GeodesicState direct = integrate_geodesic(ideal, st, 3.5, GeodesicOptions{.tol = 1e-12}).steps.back().state;
  REQUIRE_THAT(tr.dense[7].state.v, WithinAbs(direct.v, 1e-8));
}

TEST_CASE("geodesic toward the degeneracy curve stops early") {
  const GasParameters p = unit_gas(1, 1);
  VanDerWaals vdw(p);
  const double tl = testsupport::locus_temperature(p, 3.0, false);
  // Just above the locus, heading down in entropy (cooling at fixed V).
  const GeodesicState st = geodesic_start(vdw, StatePoint::tv(1.05 * tl, 3.0), -0.5, 0.0);
  const Trajectory tr = integrate_geodesic(vdw, st, 50.0);
  REQUIRE(tr.stop != GeodesicStop::Completed);
  REQUIRE_FALSE(tr.reason.empty());
  REQUIRE(tr.steps.back().state.t < 50.0);
  REQUIRE(std::fabs(tr.steps.back().det_rel) < 0.2);

  // Launched hard toward the covolume: V creeps toward b but never crosses.
  const Trajectory out = integrate_geodesic(vdw, geodesic_start(vdw, StatePoint::tv(3.0, 1.5), 0.0, -20.0), 50.0);
  for (const GeodesicSample& g : out.steps) REQUIRE(g.state.v > p.b);
  REQUIRE(out.steps.back().state.v < 1.1 * p.b);
}

TEST_CASE("inadmissible starts are rejected") {
  const GasParameters p = unit_gas(1, 1);
  VanDerWaals vdw(p);
  REQUIRE_THROWS_AS(integrate_geodesic(vdw, GeodesicState{0.0, 0.5, 0.1, 0.1, 0.0}, 1.0), DomainError);
  const double tl = testsupport::locus_temperature(p, 3.0, false);
  REQUIRE_THROWS_AS(integrate_geodesic(vdw, geodesic_start(vdw, StatePoint::tv(tl, 3.0), 0.1, 0.0), 1.0),
                    SingularState);
}

TEST_CASE("geodesic deviation") {
  const GasParameters p = unit_gas(1, 1);
  IdealGas ideal(p);
  const GeodesicState st = geodesic_start(ideal, StatePoint::tv(2.0, 3.0), 0.05, 0.1);
  const auto flat = geodesic_deviation(ideal, st, 0.0, 1.0, 10.0, 11);
  REQUIRE(flat.size() == 11);
  for (const DeviationSample& d : flat) REQUIRE_THAT(d.separation, WithinRel(flat.front().separation, 1e-6));

  // Curved case: separation changes at second order, with the sign set by R.
  VanDerWaals vdw(p);
  const StatePoint at = StatePoint::tv(1.0, 3.0);
  const double r = curvature_report(vdw, at).value();
  const GeodesicState sv = geodesic_start(vdw, at, 0.0, 0.3);
  const auto curved = geodesic_deviation(vdw, sv, 1.0, 0.0, 2.0, 5);
  const double change = curved.back().separation - curved.front().separation;
  REQUIRE(std::fabs(change) > 1e-4 * curved.front().separation);
  // Positive curvature focuses, negative spreads.
  REQUIRE((r > 0.0) == (change < 0.0));
}

TEST_CASE("leaving the volume window is a domain exit") {
  // Ideal-gas profile cut off at V = 2.
  const ConstantCv cut([](double v) { return pow(Taylor3::variable(v), -2.0 / 3.0); },
                       [](double) { return Taylor3(0.0); }, 1.5, 0.0, 2.0);
  const GeodesicState st = geodesic_start(cut, StatePoint::tv(1.0, 3.0), 0.0, -1.0);
  const Trajectory tr = integrate_geodesic(cut, st, 20.0);
  REQUIRE(tr.stop == GeodesicStop::DomainExit);
  REQUIRE(tr.steps.back().state.v > 2.0);
  REQUIRE(tr.steps.back().state.v < 2.0 + 1e-6);
}
