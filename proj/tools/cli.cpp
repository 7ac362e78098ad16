#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "thermogeo/critical_locus.hpp"
#include "thermogeo/curvature.hpp"
#include "thermogeo/errors.hpp"
#include "thermogeo/expr.hpp"
#include "thermogeo/geodesics.hpp"
#include "thermogeo/hessian_surface.hpp"
#include "thermogeo/version.hpp"

namespace thermogeo::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string model = "vdw";
  std::optional<double> a, b;
  double r_gas = 1.0;
  double cv = 1.5;
  std::string f1, f2 = "0";
  std::string chart = "tv";
  std::optional<double> x1_min, x1_max, v_min, v_max;
  int n = 21;
  std::string out;
  std::string format = "csv";
  int threads = 0;

  // geodesic
  std::optional<double> start_x1, start_v;
  double ds = 0.02, dv = 0.1, t_end = 10.0, tol = 1e-10;
  // locus
  std::string curve = "locus";
  double r_min = 0.4, r_max = 5.0;
  // verify
  double threshold_scale = 1.0;
};

// Validation problems found after parsing.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
};

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c) {
  auto opt = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string("unset"); };
  std::vector<std::pair<std::string, std::string>> m = {
      {"program", "thermogeo"}, {"version", kVersion}, {"command", c.command}, {"model", c.model},
      {"a", opt(c.a)},          {"b", opt(c.b)},       {"r-gas", fmt(c.r_gas)}, {"cv", fmt(c.cv)},
      {"chart", c.chart},       {"x1-min", opt(c.x1_min)}, {"x1-max", opt(c.x1_max)},
      {"vmin", opt(c.v_min)},   {"vmax", opt(c.v_max)},   {"n", std::to_string(c.n)}};
  if (c.model == "constant-cv") {
    m.emplace_back("f1", c.f1);
    m.emplace_back("f2", c.f2);
  }
  if (c.command == "geodesic") {
    m.emplace_back("start-x1", opt(c.start_x1));
    m.emplace_back("start-v", opt(c.start_v));
    m.emplace_back("ds", fmt(c.ds));
    m.emplace_back("dv", fmt(c.dv));
    m.emplace_back("t-end", fmt(c.t_end));
    m.emplace_back("tol", fmt(c.tol));
  }
  if (c.command == "verify") m.emplace_back("threshold-scale", fmt(c.threshold_scale));
  if (c.command == "locus") {
    m.emplace_back("curve", c.curve);
    if (c.curve == "reduced") {
      m.emplace_back("rmin", fmt(c.r_min));
      m.emplace_back("rmax", fmt(c.r_max));
    }
  }
  return m;
}

void write_csv(std::ostream& os, const RunConfig& c, const Table& t) {
  for (const auto& [k, v] : metadata(c)) os << "# " << k << ": " << v << "\n";
  for (const std::string& n : t.notes) os << "# note: " << n << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (const double* d = std::get_if<double>(&row[i]))
        os << (std::isfinite(*d) ? fmt(*d) : std::string());
      else if (const std::string* s = std::get_if<std::string>(&row[i]))
        os << *s;
    }
    os << "\n";
  }
}

// Rows are written by hand so numbers keep the same %.17g text as the CSV.
void write_json(std::ostream& os, const RunConfig& c, const Table& t) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata(c)) meta[k] = v;
  os << "{\n  \"metadata\": " << meta.dump() << ",\n  \"notes\": " << nlohmann::json(t.notes).dump()
     << ",\n  \"columns\": " << nlohmann::json(t.columns).dump() << ",\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    [" : "\n    [");
    const auto& row = t.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ", ";
      if (const double* d = std::get_if<double>(&row[i]))
        os << (std::isfinite(*d) ? fmt(*d) : std::string("null"));
      else if (const std::string* s = std::get_if<std::string>(&row[i]))
        os << nlohmann::json(*s).dump();
      else
        os << "null";
    }
    os << "]";
  }
  os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::optional<double> number(const Cell& c) {
  if (const double* d = std::get_if<double>(&c))
    if (std::isfinite(*d)) return *d;
  return std::nullopt;
}

// Minimal static plot: polyline of columns (x, y) or a heat map of z over (x, y).
struct SvgSpec {
  std::size_t x = 0, y = 1;
  std::optional<std::size_t> z;
  std::optional<std::size_t> group;  // separate polylines per value change
};

void write_svg(std::ostream& os, const RunConfig& c, const Table& t, const SvgSpec& spec) {
  const double w = 640, h = 480, pad = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY, zmax = 0.0;
  for (const auto& row : t.rows) {
    const auto x = number(row[spec.x]), y = number(row[spec.y]);
    if (!x || !y) continue;
    x0 = std::min(x0, *x), x1 = std::max(x1, *x), y0 = std::min(y0, *y), y1 = std::max(y1, *y);
    if (spec.z)
      if (const auto z = number(row[*spec.z])) zmax = std::max(zmax, std::log10(1.0 + std::fabs(*z)));
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<!--\n";
  for (const auto& [k, v] : metadata(c)) os << "  " << k << ": " << v << "\n";
  for (const std::string& n : t.notes) os << "  note: " << n << "\n";
  os << "-->\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\"" << h - 2 * pad
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << t.columns[spec.x]
     << "</text>\n";
  os << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
     << ")\" text-anchor=\"middle\">" << t.columns[spec.y] << "</text>\n";

  if (spec.z) {
    std::vector<double> xs, ys;
    for (const auto& row : t.rows) {
      if (const auto x = number(row[spec.x])) xs.push_back(*x);
      if (const auto y = number(row[spec.y])) ys.push_back(*y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    const double cw = (w - 2 * pad) / std::max<std::size_t>(1, xs.size() - 1);
    const double ch = (h - 2 * pad) / std::max<std::size_t>(1, ys.size() - 1);
    for (const auto& row : t.rows) {
      const auto x = number(row[spec.x]), y = number(row[spec.y]);
      if (!x || !y) continue;
      const auto z = number(row[*spec.z]);
      std::string fill = "#808080";  // singular or missing
      if (z) {
        const double m = zmax > 0.0 ? std::log10(1.0 + std::fabs(*z)) / zmax : 0.0;
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - m)));
        char buf[16];
        if (*z >= 0.0)
          std::snprintf(buf, sizeof buf, "#ff%02x%02x", shade, shade);
        else
          std::snprintf(buf, sizeof buf, "#%02x%02xff", shade, shade);
        fill = buf;
      }
      os << "<rect x=\"" << fmt(px(*x) - cw / 2) << "\" y=\"" << fmt(py(*y) - ch / 2) << "\" width=\"" << fmt(cw)
         << "\" height=\"" << fmt(ch) << "\" fill=\"" << fill << "\"/>\n";
    }
  } else {
    std::string points;
    std::string last_group;
    auto flush = [&] {
      if (!points.empty()) os << "<polyline fill=\"none\" stroke=\"black\" points=\"" << points << "\"/>\n";
      points.clear();
    };
    for (const auto& row : t.rows) {
      if (spec.group) {
        const std::string* g = std::get_if<std::string>(&row[*spec.group]);
        const std::string gs = g ? *g : std::string();
        if (gs != last_group) flush();
        last_group = gs;
      }
      const auto x = number(row[spec.x]), y = number(row[spec.y]);
      if (!x || !y) {
        flush();
        continue;
      }
      points += fmt(px(*x)) + "," + fmt(py(*y)) + " ";
    }
    flush();
  }
  os << "</svg>\n";
}

// ---------------------------------------------------------------------------

ModelPtr make_model(RunConfig& c) {
  GasParameters p;
  p.r_gas = c.r_gas;
  p.cv0 = c.cv;
  if (c.model == "ideal") {
    p.a = c.a.value_or(0.0);
    p.b = c.b.value_or(0.0);
    p.validate();
    c.a = p.a;
    c.b = p.b;
    return std::make_shared<IdealGas>(p);
  }
  if (c.model == "vdw" || c.model == "berthelot") {
    p.a = c.a.value_or(1.0);
    p.b = c.b.value_or(1.0);
    p.validate();
    c.a = p.a;
    c.b = p.b;
    if (c.model == "vdw") return std::make_shared<VanDerWaals>(p);
    return std::make_shared<Berthelot>(p);
  }
  if (c.model == "constant-cv") {
    if (c.f1.empty()) throw ConfigError("constant-cv needs --f1");
    if (!(c.cv > 0.0) && !(c.cv < 0.0)) throw ConfigError("--cv must be nonzero");
    const Expression f1 = Expression::parse(c.f1), f2 = Expression::parse(c.f2);
    c.a.reset();
    c.b = c.b.value_or(0.0);
    return std::make_shared<ConstantCv>(f1.profile(), f2.profile(), c.cv, 0.0, c.b.value_or(0.0));
  }
  throw ConfigError("unknown model '" + c.model + "'");
}

struct Grid {
  double x1_lo, x1_hi, v_lo, v_hi;
  int n;
  Chart chart;

  double x1(int i) const { return x1_lo + (x1_hi - x1_lo) * i / (n - 1); }
  double v(int j) const { return v_lo + (v_hi - v_lo) * j / (n - 1); }
  StatePoint at(int i, int j) const { return {chart, x1(i), v(j)}; }
  std::string x1_name() const { return chart == Chart::TemperatureVolume ? "T" : "S"; }
};

// Resolves defaults and clipping, and writes the ranges used back into the config.
Grid make_grid(RunConfig& c, const ConstitutiveModel& m, std::ostream& err) {
  if (c.n < 2) throw ConfigError("grid resolution --n must be at least 2");
  Grid g;
  g.n = c.n;
  g.chart = c.chart == "sv" ? Chart::EntropyVolume : Chart::TemperatureVolume;
  const double floor = m.min_volume();
  g.x1_lo = c.x1_min.value_or(g.chart == Chart::TemperatureVolume ? 0.1 : -1.0);
  g.x1_hi = c.x1_max.value_or(g.chart == Chart::TemperatureVolume ? 1.0 : 1.0);
  g.v_lo = c.v_min.value_or(floor + 0.5);
  g.v_hi = c.v_max.value_or(floor + 7.0);
  if (!(g.x1_hi > g.x1_lo)) throw ConfigError("first coordinate range is empty");
  if (!(g.v_hi > g.v_lo)) throw ConfigError("volume range is empty");
  if (g.chart == Chart::TemperatureVolume && !(g.x1_lo > 0.0))
    throw ConfigError("temperature range must be positive");
  if (!(g.v_lo > floor)) {
    const double clipped = floor + 1e-3 * std::max(1.0, std::fabs(floor));
    if (!(g.v_hi > clipped)) throw ConfigError("volume range lies below the model's minimum volume");
    err << "warning: --vmin " << fmt(g.v_lo) << " is not above the minimum volume " << fmt(floor)
        << "; clipped to " << fmt(clipped) << "\n";
    g.v_lo = clipped;
  }
  c.x1_min = g.x1_lo;
  c.x1_max = g.x1_hi;
  c.v_min = g.v_lo;
  c.v_max = g.v_hi;
  return g;
}

// Row-major evaluation over the grid; each worker fills its own rows.
std::vector<std::vector<Cell>> evaluate_grid(const Grid& g, int threads,
                                             const std::function<std::vector<Cell>(const StatePoint&)>& cell) {
  const std::size_t total = static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n);
  std::vector<std::vector<Cell>> rows(total);
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(g.n));
  auto run = [&](unsigned w) {
    for (std::size_t k = w; k < total; k += workers)
      rows[k] = cell(g.at(static_cast<int>(k / g.n), static_cast<int>(k % g.n)));
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  return rows;
}

Cell opt_cell(const std::optional<double>& x) { return x ? Cell(*x) : Cell(); }

Table cmd_curvature_grid(const RunConfig& c, const ConstitutiveModel& m, const Grid& g) {
  Table t;
  t.columns = {g.x1_name(), "V", "det", "r_tensorial", "r_closed2d", "r_elementary", "r_model_closed",
               "signature", "status"};
  t.rows = evaluate_grid(g, c.threads, [&](const StatePoint& s) {
    std::vector<Cell> row{s.x1, s.x2, Cell(), Cell(), Cell(), Cell(), Cell(), Cell(), Cell()};
    try {
      const MetricTensor2 mt = weinhold_metric(m, s);
      row[2] = mt.det();
      row[7] = to_string(eigen_signature(mt).cls);
      const CurvatureReport r = curvature_report(m, s);
      row[3] = opt_cell(r.r_tensorial);
      row[4] = opt_cell(r.r_closed2d);
      row[5] = opt_cell(r.r_elementary);
      row[6] = opt_cell(r.r_model_closed);
      row[8] = std::string("ok");
    } catch (const SingularState&) {
      row[8] = std::string("singular");
    } catch (const DomainError&) {
      row[8] = std::string("outside");
    } catch (const std::domain_error&) {
      row[8] = std::string("outside");
    }
    return row;
  });
  return t;
}

Table cmd_surface(const RunConfig& c, const ConstitutiveModel& m, const Grid& g) {
  Table t;
  t.columns = {g.x1_name(), "V", "e11", "e12", "e22", "pairing_raw", "pairing_oriented", "radial_class",
               "curvature", "sign_match", "surface_residual", "status"};
  const auto* vdw = dynamic_cast<const VanDerWaals*>(&m);
  const auto* ideal = dynamic_cast<const IdealGas*>(&m);
  t.rows = evaluate_grid(g, c.threads, [&](const StatePoint& s) {
    std::vector<Cell> row(12);
    row[0] = s.x1;
    row[1] = s.x2;
    try {
      const MetricTensor2 mt = weinhold_metric(m, s);
      row[2] = mt.e11;
      row[3] = mt.e12;
      row[4] = mt.e22;
      if (ideal) {
        const auto& p = ideal->parameters();
        row[10] = ideal_conic_residual(mt, p.cv0 + p.r_gas, p.r_gas).relative();
      } else if (vdw) {
        row[10] = vdw_quintic_residual(mt, vdw->parameters()).relative();
      }
      const RadialPairing rp = radial_pairing(hessian_point(mt));
      row[5] = rp.raw;
      row[6] = rp.oriented;
      row[7] = to_string(rp.cls);
      const double r = curvature_report(m, s).value();
      row[8] = r;
      const bool match = rp.cls == RadialClass::Tangent ? std::fabs(r) < 1e-8 * (1.0 + std::fabs(r))
                                                        : (rp.oriented > 0.0) == (r > 0.0);
      row[9] = std::string(match ? "yes" : "no");
      row[11] = std::string("ok");
    } catch (const FrameSingular&) {
      row[11] = std::string("frame-singular");
    } catch (const SingularState&) {
      row[11] = std::string("singular");
    } catch (const DomainError&) {
      row[11] = std::string("outside");
    } catch (const std::domain_error&) {
      row[11] = std::string("outside");
    }
    return row;
  });
  return t;
}

Table cmd_locus(RunConfig& c, const ConstitutiveModel& m, std::ostream& err) {
  Table t;
  if (c.curve == "locus") {
    t.columns = {"V", "S", "T", "p", "det_residual", "branch"};
    try {
      const Grid g = make_grid(c, m, err);
      const LocusPolyline loc = degeneracy_locus(m, g.v_lo, g.v_hi, c.n);
      for (const LocusSample& s : loc.samples) t.rows.push_back({s.v, s.s, s.t, s.p, s.det_residual, loc.branch});
    } catch (const NoRoot& e) {
      t.notes.push_back(std::string("empty locus: ") + e.what());
    }
    return t;
  }
  const ModelKind kind = m.kind();
  if (c.curve == "reduced") {
    if (c.n < 2) throw ConfigError("--n must be at least 2");
    if (!(c.r_max > c.r_min)) throw ConfigError("reduced volume range is empty");
    t.columns = {"v_r", "p_r", "t_r"};
    for (int i = 0; i < c.n; ++i) {
      const double vr = c.r_min + (c.r_max - c.r_min) * i / (c.n - 1);
      try {
        const ReducedPoint r = reduced_curves(kind, vr);
        t.rows.push_back({vr, r.p_r, r.t_r});
      } catch (const DomainError&) {
        t.rows.push_back({vr, Cell(), Cell()});
      }
    }
    return t;
  }
  if (c.curve == "coexistence") {
    if (c.n < 2) throw ConfigError("--n must be at least 2");
    t.columns = {"t_r", "p_r1", "p_r2", "p_r3"};
    std::vector<double> ts;
    for (int i = 1; i <= c.n; ++i) ts.push_back(static_cast<double>(i) / c.n);
    for (const CoexistencePoint& p : coexistence_curve(kind, ts))
      t.rows.push_back({p.t_r, opt_cell(p.p_r[0]), opt_cell(p.p_r[1]), opt_cell(p.p_r[2])});
    t.notes.push_back("branches with v_r <= 1/3 lie inside the covolume and are left empty");
    return t;
  }
  throw ConfigError("--curve must be locus, reduced or coexistence");
}

Table cmd_critical(const ConstitutiveModel& m) {
  const CriticalPoint num = critical_point(m);
  std::optional<CriticalPoint> closed;
  if (const auto* v = dynamic_cast<const VanDerWaals*>(&m)) closed = vdw_critical_point(v->parameters());
  if (const auto* b = dynamic_cast<const Berthelot*>(&m)) closed = berthelot_critical_point(b->parameters());
  Table t;
  t.columns = {"quantity", "numeric", "closed_form", "rel_diff", "match"};
  auto add = [&](const std::string& name, double x, std::optional<double> y) {
    if (!y) {
      t.rows.push_back({name, x, Cell(), Cell(), Cell()});
      return;
    }
    const double d = std::fabs(x - *y) / std::max(std::fabs(*y), 1e-300);
    t.rows.push_back({name, x, *y, d, std::string(d < 1e-8 ? "yes" : "no")});
  };
  add("V_c", num.v_c, closed ? std::optional(closed->v_c) : std::nullopt);
  add("p_c", num.p_c, closed ? std::optional(closed->p_c) : std::nullopt);
  add("T_c", num.t_c, closed ? std::optional(closed->t_c) : std::nullopt);
  t.rows.push_back({std::string("S_c"), num.s_c, Cell(), Cell(), Cell()});
  t.rows.push_back({std::string("dp_dV_isotherm"), num.dp_dv_isotherm, Cell(), Cell(), Cell()});
  t.rows.push_back({std::string("d2p_dV2_isotherm"), num.d2p_dv2_isotherm, Cell(), Cell(), Cell()});
  if (num.has_negative_branch) {
    t.rows.push_back({std::string("T_c_negative"), num.t_c_negative, Cell(), Cell(), Cell()});
    t.rows.push_back({std::string("p_c_negative"), num.p_c_negative, Cell(), Cell(), Cell()});
    t.notes.push_back("negative T_c, p_c branch reported for completeness; not physical");
  }
  return t;
}

Table cmd_geodesic(RunConfig& c, const ConstitutiveModel& m) {
  if (c.n < 2) throw ConfigError("--n must be at least 2");
  if (!(c.t_end > 0.0)) throw ConfigError("--t-end must be positive");
  if (!(c.tol > 0.0)) throw ConfigError("--tol must be positive");
  const Chart chart = c.chart == "sv" ? Chart::EntropyVolume : Chart::TemperatureVolume;
  const double x1 = c.start_x1.value_or(chart == Chart::TemperatureVolume ? 1.0 : 0.0);
  const double v = c.start_v.value_or(m.min_volume() + 2.0);
  c.start_x1 = x1;
  c.start_v = v;
  const StatePoint at{chart, x1, v};
  m.check_admissible(at);
  const GeodesicState st = geodesic_start(m, at, c.ds, c.dv);
  GeodesicOptions opt;
  opt.tol = c.tol;
  for (int i = 0; i < c.n; ++i) opt.sample_times.push_back(c.t_end * i / (c.n - 1));
  const Trajectory tr = integrate_geodesic(m, st, c.t_end, opt);

  Table t;
  t.columns = {"t", "S", "V", "S_dot", "V_dot", "T", "speed", "det_rel"};
  for (const GeodesicSample& g : tr.dense)
    t.rows.push_back({g.state.t, g.state.s, g.state.v, g.state.s_dot, g.state.v_dot,
                      m.temperature_at(g.state.s, g.state.v), g.speed, g.det_rel});
  t.notes.push_back("stop: " + to_string(tr.stop) + (tr.reason.empty() ? "" : " (" + tr.reason + ")"));
  t.notes.push_back("max relative speed drift: " + fmt(tr.max_speed_drift()));
  if (tr.stop != GeodesicStop::Completed) {
    // Finish the trace with the last state actually reached.
    const GeodesicSample& g = tr.steps.back();
    t.rows.push_back({g.state.t, g.state.s, g.state.v, g.state.s_dot, g.state.v_dot,
                      m.temperature_at(g.state.s, g.state.v), g.speed, g.det_rel});
  }
  return t;
}

struct Check {
  std::string name;
  double threshold;
  double worst = 0.0;
  int samples = 0;

  void add(double residual) {
    worst = std::max(worst, std::isfinite(residual) ? residual : INFINITY);
    ++samples;
  }
};

Table cmd_verify(const ConstitutiveModel& m, const Grid& g, double threshold_scale, bool& failed) {
  Check routes{"curvature-route-agreement", kRouteTolerance};
  Check det_kvc{"det-equals-T/(k V Cv)", 1e-10};
  Check det_dpdv{"det-equals-(-T/Cv) dp/dV", 1e-10};
  Check det_split{"det-constant-cv-split", 1e-10};
  Check id1{"identity-heat-capacity", 1e-8};
  Check id2{"identity-compressibility", 1e-8};
  Check id3{"identity-constant-cv-ratio", 1e-8};
  Check cpcv{"cp-minus-cv", 1e-10};
  Check closure{"hessian-closure", 1e-10};
  Check conformal{"conformal-relation", 1e-8};
  Check christ{"christoffel-explicit-vs-metric", 1e-9};
  Check flat{"ideal-gas-flatness", 1e-10};
  const bool cc = m.has_constant_cv();
  const bool is_ideal = m.kind() == ModelKind::IdealGas;
  int skipped = 0;

  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const StatePoint s0 = g.at(i, j);
      try {
        const StatePoint s = m.to_entropy_chart(s0);
        const MetricTensor2 mt = weinhold_metric(m, s);
        const double scale = std::fabs(mt.e11 * mt.e22) + mt.e12 * mt.e12;
        if (!(std::fabs(mt.det()) > 1e-3 * scale)) {
          ++skipped;
          continue;
        }
        const CurvatureReport r = curvature_report(m, s);
        routes.add(r.max_pairwise_residual);
        if (is_ideal) flat.add(std::fabs(r.value()));
        const DeterminantReport d = determinant_report(m, s);
        det_kvc.add(std::fabs(d.residual_kvc) / d.scale);
        det_dpdv.add(std::fabs(d.residual_dpdv) / d.scale);
        if (d.residual_split) det_split.add(std::fabs(*d.residual_split) / d.scale);
        const IdentityResiduals ir = identity_residuals(m, s);
        id1.add(ir.id1_scale > 0.0 ? std::fabs(ir.id1) / ir.id1_scale : std::fabs(ir.id1));
        id2.add(ir.id2_scale > 0.0 ? std::fabs(ir.id2) / ir.id2_scale : std::fabs(ir.id2));
        if (ir.id3) id3.add(*ir.id3_scale > 0.0 ? std::fabs(*ir.id3) / *ir.id3_scale : std::fabs(*ir.id3));
        cpcv.add(std::fabs(ir.cp_cv) / ir.cp_cv_scale);
        const double dscale = std::fabs(mt.d[1]) + std::fabs(mt.d[3]);
        closure.add(dscale > 0.0 ? hessian_closure_residual(mt) / dscale : hessian_closure_residual(mt));
        conformal.add(ruppeiner_from_weinhold(m, s).residual);
        if (m.coefficients(s).alpha != 0.0) {
          const ChristoffelSet a = christoffel_elementary(m, s), b = christoffel_from_metric(mt);
          double w = 0.0, sc = 0.0;
          for (int k = 0; k < 2; ++k)
            for (int p = 0; p < 2; ++p)
              for (int q = 0; q < 2; ++q) {
                w = std::max(w, std::fabs(a(k, p, q) - b(k, p, q)));
                sc = std::max(sc, std::fabs(b(k, p, q)));
              }
          christ.add(sc > 0.0 ? w / sc : w);
        }
      } catch (const SingularState&) {
        ++skipped;
      } catch (const DomainError&) {
        ++skipped;
      } catch (const std::domain_error&) {
        ++skipped;
      }
    }

  std::vector<Check> checks = {routes, det_kvc, det_dpdv, id1, id2, cpcv, closure, conformal, christ};
  if (cc) {
    checks.push_back(det_split);
    checks.push_back(id3);
  }
  if (is_ideal) checks.push_back(flat);
  if (routes.samples == 0) throw NoRoot("no usable states in the verification grid");

  Table t;
  t.columns = {"check", "max_residual", "threshold", "samples", "status"};
  failed = false;
  for (Check& ch : checks) {
    ch.threshold *= threshold_scale;
    const bool pass = ch.samples > 0 && ch.worst <= ch.threshold;
    failed = failed || !pass;
    t.rows.push_back({ch.name, ch.worst, ch.threshold, static_cast<double>(ch.samples),
                      std::string(pass ? "PASS" : "FAIL")});
  }
  t.notes.push_back("states skipped near the degeneracy locus or outside the domain: " + std::to_string(skipped));
  return t;
}

void emit(const RunConfig& c, const Table& t, std::ostream& out, const std::optional<SvgSpec>& svg) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + c.out + "'");
    os = &file;
  }
  if (c.format == "csv")
    write_csv(*os, c, t);
  else if (c.format == "json")
    write_json(*os, c, t);
  else if (svg)
    write_svg(*os, c, t, *svg);
  else
    throw ConfigError("svg output is not available for '" + c.command + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Thermodynamic Hessian geometry: curvature, loci and geodesics", "thermogeo"};
  app.set_config("--config", "", "key = value file; explicit flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--model", c.model, "ideal, vdw, berthelot or constant-cv")
      ->check(CLI::IsMember({"ideal", "vdw", "berthelot", "constant-cv"}));
  app.add_option("--a", c.a, "attraction parameter");
  app.add_option("--b", c.b, "covolume (minimum volume for constant-cv)");
  app.add_option("--r-gas", c.r_gas, "gas constant");
  app.add_option("--cv", c.cv, "heat capacity at constant volume (Berthelot: its ideal part)");
  app.add_option("--f1", c.f1, "constant-cv profile f1(V)");
  app.add_option("--f2", c.f2, "constant-cv profile f2(V)");
  app.add_option("--chart", c.chart, "sv (entropy, volume) or tv (temperature, volume)")
      ->check(CLI::IsMember({"sv", "tv"}));
  app.add_option("--smin,--tmin", c.x1_min, "lower bound of the first coordinate");
  app.add_option("--smax,--tmax", c.x1_max, "upper bound of the first coordinate");
  app.add_option("--vmin", c.v_min, "lower volume bound");
  app.add_option("--vmax", c.v_max, "upper volume bound");
  app.add_option("--n", c.n, "points per axis (or samples along a curve)");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--threads", c.threads, "worker threads for grids (0 = hardware)")->check(CLI::NonNegativeNumber);

  auto* grid = app.add_subcommand("curvature-grid", "scalar curvature by every route on a grid");
  auto* locus = app.add_subcommand("locus", "degeneracy locus or its reduced forms");
  locus->add_option("--curve", c.curve, "locus, reduced or coexistence")
      ->check(CLI::IsMember({"locus", "reduced", "coexistence"}));
  locus->add_option("--rmin", c.r_min, "lower reduced volume");
  locus->add_option("--rmax", c.r_max, "upper reduced volume");
  auto* critical = app.add_subcommand("critical", "critical point with closed-form comparison");
  auto* geodesic = app.add_subcommand("geodesic", "integrate one geodesic");
  geodesic->add_option("--x1", c.start_x1, "starting S or T (per --chart)");
  geodesic->add_option("--v", c.start_v, "starting volume");
  geodesic->add_option("--ds", c.ds, "initial dS/dt");
  geodesic->add_option("--dv", c.dv, "initial dV/dt");
  geodesic->add_option("--t-end", c.t_end, "final affine parameter");
  geodesic->add_option("--tol", c.tol, "local error tolerance");
  auto* surface = app.add_subcommand("surface", "Hessian-surface radial classification on a grid");
  auto* verify = app.add_subcommand("verify", "identity and route-agreement suite");
  verify->add_option("--threshold-scale", c.threshold_scale, "multiplies every pass threshold")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  for (auto* sub : {grid, locus, critical, geodesic, surface, verify})
    if (sub->parsed()) c.command = sub->get_name();

  try {
    const ModelPtr model = make_model(c);
    const ConstitutiveModel& m = *model;
    if (c.command == "curvature-grid") {
      const Grid g = make_grid(c, m, err);
      emit(c, cmd_curvature_grid(c, m, g), out, SvgSpec{0, 1, 3, std::nullopt});
    } else if (c.command == "surface") {
      const Grid g = make_grid(c, m, err);
      emit(c, cmd_surface(c, m, g), out, SvgSpec{0, 1, 6, std::nullopt});
    } else if (c.command == "locus") {
      const Table t = cmd_locus(c, m, err);
      for (const std::string& n : t.notes)
        if (n.rfind("empty locus", 0) == 0) err << n << "\n";
      const SvgSpec spec = c.curve == "locus" ? SvgSpec{0, 2, std::nullopt, std::nullopt}
                           : c.curve == "reduced" ? SvgSpec{2, 1, std::nullopt, std::nullopt}
                                                  : SvgSpec{0, 3, std::nullopt, std::nullopt};
      emit(c, t, out, spec);
    } else if (c.command == "critical") {
      emit(c, cmd_critical(m), out, std::nullopt);
    } else if (c.command == "geodesic") {
      emit(c, cmd_geodesic(c, m), out, SvgSpec{2, 1, std::nullopt, std::nullopt});
    } else if (c.command == "verify") {
      bool failed = false;
      const Grid g = make_grid(c, m, err);
      emit(c, cmd_verify(m, g, c.threshold_scale, failed), out, std::nullopt);
      if (failed) {
        err << "verification failed\n";
        return kVerification;
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    err << "error: profile expression: " << e.what() << "\n";
    return kValidation;
  } catch (const UnsupportedModel& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}

}  // namespace thermogeo::cli
