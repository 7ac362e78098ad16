#include "thermogeo/geodesics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "thermogeo/curvature.hpp"
#include "thermogeo/errors.hpp"

namespace thermogeo {

double ChristoffelSet::operator()(int k, int i, int j) const {
  const bool mixed = i != j;
  if (k == 0) return mixed ? g112 : (i == 0 ? g111 : g122);
  return mixed ? g212 : (i == 0 ? g211 : g222);
}

namespace {

void check_nonsingular(const Coefficients& c) {
  const auto e = weinhold_entries_from_coefficients(c);
  const double det = c.t / (c.k * c.v * c.cv);
  if (!std::isfinite(det) || degenerate_2x2(e[0], e[1], e[2]))
    throw SingularState("Christoffel symbols diverge: metric is degenerate at this point", det, c.t, c.v);
  if (c.alpha == 0.0)
    throw SingularState("thermal expansion vanishes; explicit Christoffel form undefined", det, c.t, c.v);
}

ChristoffelSet assemble(const Coefficients& c, double f, double j, double d, double b) {
  const double a = c.alpha, k = c.k, cv = c.cv, cp = c.cp, tv = c.t * c.v;
  ChristoffelSet g;
  g.f = f;
  g.j = j;
  g.d = d;
  g.b = b;
  g.g111 = 0.5 * (cp * j / (cv * cv) - tv * a * d / (cv * cv));
  // Sign of the first term differs from the commonly printed form; this one
  // matches the metric route.
  g.g112 = -0.5 * (d / cv - tv * a * a * f / (k * k * cv));
  g.g122 = 0.5 * (a * d / (k * cv) - tv * a * a * a * f / (k * k * k * cv) - b / k);
  g.g211 = 0.5 * (tv * a * j / (cv * cv) - tv * k * d / (cv * cv));
  g.g212 = 0.5 * tv * a * f / (k * cv);
  g.g222 = -0.5 * (cp * f / (k * cv) + b / a);
  return g;
}

}  // namespace

ChristoffelSet christoffel_elementary(const Coefficients& c, const CoefficientPartials& d) {
  check_nonsingular(c);
  const double a = c.alpha, k = c.k;
  return assemble(c, d.dk_dV - k * d.dalpha_dV / a, 1.0 - d.dcv_dS, a / k + d.dcv_dV, a / c.v + d.dalpha_dV);
}

ChristoffelSet christoffel_elementary(const ConstitutiveModel& model, const StatePoint& s) {
  const StatePoint sv = model.to_entropy_chart(s);
  return christoffel_elementary(model.coefficients(sv), model.coefficient_partials(sv));
}

ChristoffelSet christoffel_constant_cv(const Coefficients& c, const CoefficientPartials& d) {
  check_nonsingular(c);
  const double a = c.alpha, k = c.k, cv = c.cv, tv = c.t * c.v;
  ChristoffelSet g;
  g.f = d.dk_dV - k * d.dalpha_dV / a;
  g.j = 1.0;
  g.d = a / k;
  g.b = a / c.v + d.dalpha_dV;
  g.g111 = 1.0 / (2.0 * cv);
  g.g112 = -0.5 * (a / (k * cv) - tv * a * a * g.f / (k * k * cv));
  g.g122 = 0.5 * (a * a / (k * k * cv) - tv * a * a * a * g.f / (k * k * k * cv) - g.b / k);
  g.g211 = 0.0;
  g.g212 = 0.5 * tv * a * g.f / (k * cv);
  g.g222 = -0.5 * (c.cp * g.f / (k * cv) + g.b / a);
  return g;
}

ChristoffelSet christoffel_from_metric(const MetricTensor2& m) {
  const ChristoffelSymbols cs = christoffel(HessianMetricField::from_metric2(m));
  ChristoffelSet g;
  g.g111 = cs(0, 0, 0);
  g.g112 = cs(0, 0, 1);
  g.g122 = cs(0, 1, 1);
  g.g211 = cs(1, 0, 0);
  g.g212 = cs(1, 0, 1);
  g.g222 = cs(1, 1, 1);
  return g;
}

Acceleration geodesic_acceleration(const ChristoffelSet& g, double s_dot, double v_dot) {
  const double ss = s_dot * s_dot, sv = s_dot * v_dot, vv = v_dot * v_dot;
  return {-(g.g111 * ss + 2.0 * g.g112 * sv + g.g122 * vv), -(g.g211 * ss + 2.0 * g.g212 * sv + g.g222 * vv)};
}

double metric_speed(const MetricTensor2& m, double s_dot, double v_dot) {
  return m.e11 * s_dot * s_dot + 2.0 * m.e12 * s_dot * v_dot + m.e22 * v_dot * v_dot;
}

std::string to_string(GeodesicStop stop) {
  switch (stop) {
    case GeodesicStop::Completed: return "completed";
    case GeodesicStop::DomainExit: return "domain-exit";
    case GeodesicStop::LocusProximity: return "locus-proximity";
  }
  return "unknown";
}

double Trajectory::max_speed_drift() const {
  if (steps.empty()) return 0.0;
  const double s0 = steps.front().speed;
  double worst = 0.0;
  auto visit = [&](const GeodesicSample& g) {
    const double d = std::fabs(g.speed - s0);
    worst = std::fmax(worst, s0 == 0.0 ? d : d / std::fabs(s0));
  };
  for (const GeodesicSample& g : steps) visit(g);
  for (const GeodesicSample& g : dense) visit(g);
  return worst;
}

GeodesicState geodesic_start(const ConstitutiveModel& model, const StatePoint& at, double s_dot, double v_dot) {
  const StatePoint sv = model.to_entropy_chart(at);
  return {sv.x1, sv.x2, s_dot, v_dot, 0.0};
}

namespace {

using Vec4 = std::array<double, 4>;  // s, v, s_dot, v_dot

struct Field {
  const ConstitutiveModel& model;
  const GeodesicOptions& opt;
  bool det_positive = true;  // side of the locus the geodesic starts on

  // Metric at y, or nothing with a stop reason when y is not usable.
  struct Eval {
    std::optional<MetricTensor2> metric;
    GeodesicStop stop = GeodesicStop::Completed;
    std::string reason;
  };

  Eval metric_at(const Vec4& y) const {
    Eval out;
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !(y[1] > model.min_volume())) {
      out.stop = GeodesicStop::DomainExit;
      out.reason = "volume left the admissible domain";
      return out;
    }
    try {
      const EnergyJet jet = model.energy_jet(StatePoint::sv(y[0], y[1]));
      const MetricTensor2 m = MetricTensor2::from_energy_jet(jet);
      if (!std::isfinite(m.e11) || !std::isfinite(m.e12) || !std::isfinite(m.e22)) {
        out.stop = GeodesicStop::DomainExit;
        out.reason = "metric is not finite";
        return out;
      }
      if (!(jet.temperature() > 0.0)) {
        out.stop = GeodesicStop::DomainExit;
        out.reason = "temperature is no longer positive";
        return out;
      }
      const double scale = std::fabs(m.e11 * m.e22) + m.e12 * m.e12;
      if (!(std::fabs(m.det()) >= opt.locus_guard * scale) || (m.det() > 0.0) != det_positive) {
        out.stop = GeodesicStop::LocusProximity;
        out.reason = "approached the degeneracy locus (|det| below guard)";
        return out;
      }
      out.metric = m;
    } catch (const DomainError& e) {
      out.stop = GeodesicStop::DomainExit;
      out.reason = e.what();
    }
    return out;
  }

  std::optional<Vec4> rhs(const Vec4& y) const {
    const Eval e = metric_at(y);
    if (!e.metric) return std::nullopt;
    ChristoffelSet g;
    try {
      if (opt.route == ChristoffelRoute::Elementary)
        g = christoffel_elementary(model, StatePoint::sv(y[0], y[1]));
      else
        g = christoffel_from_metric(*e.metric);
    } catch (const SingularState&) {
      g = christoffel_from_metric(*e.metric);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    const Acceleration a = geodesic_acceleration(g, y[2], y[3]);
    const Vec4 out{y[2], y[3], a.s_ddot, a.v_ddot};
    for (double x : out)
      if (!std::isfinite(x)) return std::nullopt;
    return out;
  }
};

GeodesicSample make_sample(const Vec4& y, double t, const MetricTensor2& m) {
  GeodesicSample g;
  g.state = {y[0], y[1], y[2], y[3], t};
  g.speed = metric_speed(m, y[2], y[3]);
  g.det_rel = m.det() / (std::fabs(m.e11 * m.e22) + m.e12 * m.e12);
  return g;
}

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

Vec4 combine(const Vec4& y, double h, std::initializer_list<std::pair<double, const Vec4*>> terms) {
  Vec4 out = y;
  for (const auto& [w, k] : terms)
    for (std::size_t i = 0; i < 4; ++i) out[i] += h * w * (*k)[i];
  return out;
}

}  // namespace

Trajectory integrate_geodesic(const ConstitutiveModel& model, const GeodesicState& init, double t_end,
                              const GeodesicOptions& opt) {
  if (!(opt.tol > 0.0)) throw DomainError("geodesic tolerance must be positive");
  Field field{model, opt};
  Vec4 y{init.s, init.v, init.s_dot, init.v_dot};
  field.det_positive = weinhold_metric(model, StatePoint::sv(init.s, init.v)).det() > 0.0;
  double t = init.t;
  if (!(t_end >= t)) throw DomainError("t_end must not precede the initial parameter");

  const auto first = field.metric_at(y);
  if (!first.metric) {
    if (first.stop == GeodesicStop::LocusProximity)
      throw SingularState("initial state lies on the degeneracy locus", 0.0, init.s, init.v);
    throw DomainError("initial state is not admissible: " + first.reason);
  }
  auto f0 = field.rhs(y);
  if (!f0) throw DomainError("geodesic equations cannot be evaluated at the initial state");

  std::vector<double> wanted = opt.sample_times;
  std::sort(wanted.begin(), wanted.end());
  std::size_t next_sample = 0;
  while (next_sample < wanted.size() && wanted[next_sample] < t) ++next_sample;

  Trajectory out;
  out.steps.push_back(make_sample(y, t, *first.metric));
  // Sample times are hit exactly by shortening the step that would pass them.
  auto emit_at = [&](double tn, const Vec4& yn, const MetricTensor2& m) {
    while (next_sample < wanted.size() && wanted[next_sample] <= tn) {
      if (wanted[next_sample] == tn) out.dense.push_back(make_sample(yn, tn, m));
      ++next_sample;
    }
  };
  emit_at(t, y, *first.metric);
  if (t_end == t) return out;

  double h = std::min(opt.initial_step, t_end - t);
  Vec4 k1 = *f0;
  GeodesicStop last_failure = GeodesicStop::Completed;
  std::string last_reason;
  for (int step = 0; step < opt.max_steps; ++step) {
    const double h_min = 1e-13 * std::max(1.0, std::fabs(t));
    if (t_end - t <= h_min) return out;
    const double target = next_sample < wanted.size() && wanted[next_sample] < t_end ? wanted[next_sample] : t_end;
    const double h_free = h;
    const bool landing = h >= target - t - h_min;
    if (landing) h = target - t;
    if (h < h_min) {
      if (last_failure == GeodesicStop::Completed && std::fabs(out.steps.back().det_rel) < 1e-2) {
        last_failure = GeodesicStop::LocusProximity;
        last_reason = "step size collapsed next to the degeneracy locus";
      }
      if (last_failure != GeodesicStop::Completed) {
        out.stop = last_failure;
        out.reason = last_reason;
        return out;
      }
      throw StepFailure("step size underflow at t = " + std::to_string(t));
    }

    std::optional<Vec4> k2, k3, k4, k5, k6, k7;
    Vec4 y5{};
    bool ok = (k2 = field.rhs(combine(y, h, {{a21, &k1}}))) &&
              (k3 = field.rhs(combine(y, h, {{a31, &k1}, {a32, &*k2}}))) &&
              (k4 = field.rhs(combine(y, h, {{a41, &k1}, {a42, &*k2}, {a43, &*k3}}))) &&
              (k5 = field.rhs(combine(y, h, {{a51, &k1}, {a52, &*k2}, {a53, &*k3}, {a54, &*k4}}))) &&
              (k6 = field.rhs(combine(y, h, {{a61, &k1}, {a62, &*k2}, {a63, &*k3}, {a64, &*k4}, {a65, &*k5}})));
    if (ok) {
      y5 = combine(y, h, {{b1, &k1}, {b3, &*k3}, {b4, &*k4}, {b5, &*k5}, {b6, &*k6}});
      ok = static_cast<bool>(k7 = field.rhs(y5));
    }
    if (!ok) {
      // Some stage left the usable region; find out why from the end point guess.
      const Vec4 probe = combine(y, h, {{1.0, &k1}});
      const auto e = field.metric_at(probe);
      last_failure = e.metric ? GeodesicStop::DomainExit : e.stop;
      last_reason = e.metric ? "stage evaluation left the admissible domain" : e.reason;
      h *= 0.25;
      ++out.rejected;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] + e6 * (*k6)[i] +
                             e7 * (*k7)[i]);
      const double sc = opt.tol * (1.0 + std::max(std::fabs(y[i]), std::fabs(y5[i])));
      err = std::max(err, std::fabs(ei) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;
    if (err > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      ++out.rejected;
      continue;
    }

    const auto e = field.metric_at(y5);
    const double t_new = landing ? target : t + h;
    emit_at(t_new, y5, *e.metric);
    last_failure = GeodesicStop::Completed;
    y = y5;
    k1 = *k7;
    t = t_new;
    out.steps.push_back(make_sample(y, t, *e.metric));
    h *= err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    if (landing) h = std::max(h, h_free);
  }
  throw StepFailure("geodesic integration exceeded the step limit");
}

std::vector<DeviationSample> geodesic_deviation(const ConstitutiveModel& model, const GeodesicState& init,
                                                double w_s, double w_v, double t_end, int samples, double eps,
                                                double tol) {
  if (samples < 2) throw DomainError("deviation needs at least two samples");
  const MetricTensor2 m0 = weinhold_metric(model, StatePoint::sv(init.s, init.v));
  const ChristoffelSet g = christoffel_from_metric(m0);
  // First-order parallel transport of the velocity along w.
  const double ds = g(0, 0, 0) * w_s * init.s_dot + g(0, 0, 1) * (w_s * init.v_dot + w_v * init.s_dot) +
                    g(0, 1, 1) * w_v * init.v_dot;
  const double dv = g(1, 0, 0) * w_s * init.s_dot + g(1, 0, 1) * (w_s * init.v_dot + w_v * init.s_dot) +
                    g(1, 1, 1) * w_v * init.v_dot;

  GeodesicOptions opt;
  opt.tol = tol;
  opt.route = ChristoffelRoute::Metric;
  for (int i = 0; i < samples; ++i) opt.sample_times.push_back(init.t + t_end * i / (samples - 1));

  auto launch = [&](double sign) {
    GeodesicState st = init;
    st.s += sign * eps * w_s;
    st.v += sign * eps * w_v;
    st.s_dot -= sign * eps * ds;
    st.v_dot -= sign * eps * dv;
    return integrate_geodesic(model, st, init.t + t_end, opt);
  };
  const Trajectory base = integrate_geodesic(model, init, init.t + t_end, opt);
  const Trajectory plus = launch(1.0), minus = launch(-1.0);
  const std::size_t n = std::min({base.dense.size(), plus.dense.size(), minus.dense.size()});

  std::vector<DeviationSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const GeodesicState& c = base.dense[i].state;
    const double js = (plus.dense[i].state.s - minus.dense[i].state.s) / (2.0 * eps);
    const double jv = (plus.dense[i].state.v - minus.dense[i].state.v) / (2.0 * eps);
    const MetricTensor2 m = weinhold_metric(model, StatePoint::sv(c.s, c.v));
    out.push_back({c.t, std::sqrt(std::fabs(metric_speed(m, js, jv)))});
  }
  return out;
}

}  // namespace thermogeo
