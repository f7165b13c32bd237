#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>

#include "definition.hpp"
#include "geodetica/error.hpp"
#include "report.hpp"

namespace geodetica::cli {

namespace {

struct Common {
  std::string file;
  std::string format = "text";
  std::string output;
  std::string plot;
  std::string projection = "xy";
  int steps = 1000;
  int nodes = 64;
  double tol = 0.0;
  bool tol_given = false;
  bool dump = false;
};

double tol_or(const Common& c, double fallback) { return c.tol_given ? c.tol : fallback; }

std::vector<double> numbers(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string part = text.substr(pos, end - pos);
    try {
      out.push_back(Expression::parse(part).eval({}));
    } catch (const Error& e) {
      throw InputError(flag + ": '" + part + "' is not a number (" + e.what() + ")");
    }
    pos = end + 1;
  }
  return out;
}

std::vector<double> numbers(const std::string& flag, const std::string& text, std::size_t n) {
  auto v = numbers(flag, text);
  if (v.size() != n) throw InputError(flag + " needs " + std::to_string(n) + " comma-separated values");
  return v;
}

Bindings parse_constants(const std::vector<std::string>& defs) {
  Bindings out;
  for (const auto& d : defs) {
    const auto eq = d.find('=');
    if (eq == std::string::npos) throw InputError("--const needs name=value, got '" + d + "'");
    const std::string name = d.substr(0, eq);
    if (!is_valid_variable_name(name)) throw InputError("invalid constant name '" + name + "'");
    out[name] = numbers("--const", d.substr(eq + 1), 1)[0];
  }
  return out;
}

Json vec(const auto& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json matrix(const Tensor& t) {
  Json j = Json::array();
  const int n = t.dim();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int k = 0; k < n; ++k) row.push_back(t({i, k}));
    j.push_back(row);
  }
  return j;
}

Json christoffel(const Christoffel& G, int n) {
  Json j = Json::object();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        j["Gamma^" + std::to_string(k + 1) + "_" + std::to_string(i + 1) + std::to_string(m + 1)] =
            G[k][i][m];
  return j;
}

DefinitionFile load_kind(const Common& c, const std::string& kind) {
  if (c.file.empty()) throw InputError("--file is required");
  DefinitionFile def = DefinitionFile::load(c.file);
  if (def.kind() != kind)
    throw InputError("'" + c.file + "' defines a " + def.kind() + ", expected a " + kind);
  return def;
}

// ---- chart ----

struct ChartArgs {
  std::string builtin;
  std::string point;
  std::string show = "all";
  std::string scalar;
  std::vector<std::string> field;
};

Report chart_command(const ChartArgs& a, const Common& c) {
  if (a.builtin.empty() == c.file.empty()) throw InputError("give exactly one of --builtin and --file");
  const Chart chart = a.builtin.empty() ? load_kind(c, "chart").chart() : Chart::builtin(a.builtin);
  if (a.point.empty()) throw InputError("--point is required");
  const auto u = numbers("--point", a.point, chart.dim());
  Report r;
  r.inputs["chart"] = chart.name();
  r.inputs["point"] = vec(u);
  const auto pd = frame(chart, u);
  const bool all = a.show == "all";
  if (all || a.show == "metric") {
    r.results["det_jacobian"] = pd.det_jacobian;
    r.results["g"] = matrix(pd.g);
    r.results["g_inv"] = matrix(pd.g_inv);
  }
  if (all || a.show == "christoffel") r.results["christoffel"] = christoffel(pd.gamma, chart.dim());
  if (all || a.show == "frame")
    for (int j = 0; j < chart.dim(); ++j) r.results["frame"]["E_" + std::to_string(j + 1)] = vec(pd.frame[j]);
  if (!a.scalar.empty()) {
    const Expression f = Expression::parse(a.scalar);
    r.inputs["scalar"] = a.scalar;
    r.results["scalar"]["gradient"] = vec(gradient(chart, f, u).components());
    r.results["scalar"]["laplacian"] = laplacian(chart, f, u);
  }
  if (!a.field.empty()) {
    if (static_cast<int>(a.field.size()) != chart.dim())
      throw InputError("--field must be given once per coordinate");
    std::vector<Expression> comps;
    for (const auto& s : a.field) comps.push_back(Expression::parse(s));
    r.inputs["field"] = a.field;
    const auto F = TensorField::vector(comps);
    r.results["field"]["divergence"] = divergence(chart, F, u);
    if (chart.dim() == 3) r.results["field"]["rotor"] = vec(rotor(chart, F, u).components());
  }
  return r;
}

// ---- curve ----

struct CurveArgs {
  std::vector<std::string> expr;
  std::string domain;
  std::string parameter = "t";
  std::vector<std::string> constants;
  std::string at;
  std::string interval;
  std::string report = "frenet";
};

Report curve_command(const CurveArgs& a, const Common& c) {
  std::optional<SpaceCurve> curve;
  if (!c.file.empty()) {
    if (!a.expr.empty()) throw InputError("give either --file or --expr, not both");
    curve = load_kind(c, "curve3d").curve();
  } else {
    if (a.expr.size() != 3) throw InputError("--expr must be given three times (x, y, z)");
    if (a.domain.empty()) throw InputError("--domain is required with --expr");
    const auto d = numbers("--domain", a.domain, 2);
    curve.emplace(Expression::parse(a.expr[0]), Expression::parse(a.expr[1]),
                  Expression::parse(a.expr[2]), d[0], d[1], parse_constants(a.constants), a.parameter);
  }
  const SpaceCurve& cv = *curve;
  Report r;
  r.inputs["x"] = cv.component(0).print();
  r.inputs["y"] = cv.component(1).print();
  r.inputs["z"] = cv.component(2).print();
  r.inputs["domain"] = vec(std::array{cv.t_min(), cv.t_max()});
  const double t = a.at.empty() ? 0.5 * (cv.t_min() + cv.t_max()) : numbers("--at", a.at, 1)[0];
  const bool all = a.report == "all";
  if (all || a.report == "frenet") {
    r.inputs["t"] = t;
    const auto f = frenet(cv, t);
    Json& j = r.results["frenet"];
    j["point"] = vec(cv.point(t));
    j["speed"] = f.speed;
    j["tau"] = vec(f.tau);
    j["k"] = f.k;
    j["degenerate"] = f.degenerate;
    if (!f.degenerate) {
      j["n"] = vec(f.n);
      j["b"] = vec(f.b);
      j["kappa"] = f.kappa;
      j["curvature_center"] = vec(curvature_center(cv, t));
    }
  }
  if (all || a.report == "length") {
    const auto iv = a.interval.empty() ? std::vector<double>{cv.t_min(), cv.t_max()}
                                       : numbers("--interval", a.interval, 2);
    r.inputs["interval"] = vec(iv);
    r.results["length"] = arc_length(cv, iv[0], iv[1]);
  }
  if (all || a.report == "kinematics") {
    r.inputs["t"] = t;
    const auto k = kinematics(cv, t);
    Json& j = r.results["kinematics"];
    j["v"] = vec(k.v);
    j["a"] = vec(k.a);
    j["a_tangential"] = vec(k.a_tangential);
    j["a_centripetal"] = vec(k.a_centripetal);
    j["speed"] = k.speed;
    const double split = norm(k.a - k.a_tangential - k.a_centripetal);
    r.residuals["acceleration_split"] = split;
    r.tolerances["acceleration_split"] = tol_or(c, 1e-8);
    r.failed = r.failed || split > tol_or(c, 1e-8);
  }
  if (all || a.report == "evolute") {
    Trajectory tr{{"t", "x", "y", "z"}, {}};
    for (const auto& s : evolute(cv, std::max(2, c.steps)))
      tr.rows.push_back({s.t, s.point[0], s.point[1], s.point[2]});
    r.trajectory = std::move(tr);
  }
  return r;
}

// ---- surface ----

struct SurfaceArgs {
  std::string point;
  std::string report = "curvature";
};

Report surface_command(const SurfaceArgs& a, const Common& c) {
  const Surface s = load_kind(c, "surface").surface();
  if (a.point.empty()) throw InputError("--point is required");
  const auto u = numbers("--point", a.point, 2);
  Report r;
  r.inputs["file"] = c.file;
  r.inputs["point"] = vec(u);
  const bool all = a.report == "all";
  const auto d = surface_point(s, u);
  if (all || a.report == "frame") {
    Json& j = r.results["frame"];
    j["point"] = vec(s.point(u));
    j["E_1"] = vec(d.E[0]);
    j["E_2"] = vec(d.E[1]);
    j["n"] = vec(d.n);
    j["g"] = matrix(d.g);
    j["det_g"] = d.det_g;
    j["b"] = matrix(d.b);
    j["omega"] = matrix(d.omega);
    j["christoffel"] = christoffel(d.gamma, 2);
  }
  if (all || a.report == "curvature") {
    const auto k = curvature(s, u);
    Json& j = r.results["curvature"];
    j["k1"] = k.k1;
    j["k2"] = k.k2;
    j["H"] = k.H;
    j["K"] = k.K;
    j["H_forms"] = k.H_forms;
    j["K_forms"] = k.K_forms;
    j["point_class"] = point_class_name(k.point_class);
    j["umbilical"] = k.umbilical;
    j["dir_1"] = vec(k.dirs[0]);
    j["dir_2"] = vec(k.dirs[1]);
    j["R_scalar"] = k.R_scalar;
    const double tg = tol_or(c, 1e-8), tc = tol_or(c, 1e-7);
    r.residuals["gauss_residual"] = k.gauss_residual;
    r.residuals["codazzi_residual"] = k.codazzi_residual;
    r.tolerances["gauss_residual"] = tg;
    r.tolerances["codazzi_residual"] = tc;
    r.failed = r.failed || !(k.gauss_residual <= tg) || !(k.codazzi_residual <= tc);
  }
  if (all || a.report == "riemann") {
    const Tensor R = riemann_tensor(s, u);
    const Tensor ric = ricci_tensor(R);
    Json& j = r.results["riemann"];
    for (int k = 0; k < 2; ++k)
      for (int q = 0; q < 2; ++q)
        for (int i = 0; i < 2; ++i)
          for (int m = 0; m < 2; ++m)
            j["R^" + std::to_string(k + 1) + "_" + std::to_string(q + 1) + std::to_string(i + 1) +
              std::to_string(m + 1)] = R({k, q, i, m});
    r.results["ricci"] = matrix(ric);
    r.results["scalar_curvature"] = scalar_curvature(ric, d.g_inv);
  }
  return r;
}

// ---- geodesic ----

struct GeodesicArgs {
  std::string start;
  std::string direction;
  double length = 0.0;
};

Report geodesic_command(const GeodesicArgs& a, const Common& c) {
  const Surface s = load_kind(c, "surface").surface();
  if (a.start.empty() || a.direction.empty()) throw InputError("--start and --direction are required");
  const auto u0 = numbers("--start", a.start, 2);
  const auto v0 = numbers("--direction", a.direction, 2);
  if (!(a.length >= 0.0)) throw InputError("--length must be nonnegative");
  Report r;
  r.inputs["file"] = c.file;
  r.inputs["start"] = vec(u0);
  r.inputs["direction"] = vec(v0);
  r.inputs["length"] = a.length;
  r.inputs["steps"] = c.steps;
  Trajectory tr{{"t", "u1", "u2", "x", "y", "z"}, {}};
  double drift = 0.0;
  if (a.length > 0.0) {
    const auto samples = geodesic_trace(s, {u0[0], u0[1]}, {v0[0], v0[1]}, a.length, c.steps);
    for (const auto& p : samples) {
      tr.rows.push_back({p.s, p.u[0], p.u[1], p.x[0], p.x[1], p.x[2]});
      const auto d = surface_point(s, p.u);
      double v2 = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v2 += d.g({i, j}) * p.udot[i] * p.udot[j];
      drift = std::max(drift, std::abs(std::sqrt(v2) - 1.0));
    }
    r.results["end"] = vec(samples.back().u);
    r.results["end_velocity"] = vec(samples.back().udot);
    r.results["end_point"] = vec(samples.back().x);
  }
  r.results["samples"] = static_cast<int>(tr.rows.size());
  r.residuals["speed_drift"] = drift;
  r.tolerances["speed_drift"] = tol_or(c, 1e-6);
  r.failed = drift > tol_or(c, 1e-6);
  r.trajectory = std::move(tr);
  return r;
}

// ---- transport ----

struct TransportArgs {
  std::string vector;
  bool covector = false;
};

Report transport_command(const TransportArgs& a, const Common& c) {
  const SurfaceCurve sc = load_kind(c, "surface_curve").surface_curve();
  if (a.vector.empty()) throw InputError("--vector is required");
  const auto a0 = numbers("--vector", a.vector, 2);
  const Vec2 start{a0[0], a0[1]};
  const auto traj = a.covector ? inner_transport_covector(sc, start, c.steps) : inner_transport(sc, start, c.steps);
  Report r;
  r.inputs["file"] = c.file;
  r.inputs["vector"] = vec(a0);
  r.inputs["covector"] = a.covector;
  r.inputs["steps"] = c.steps;
  Trajectory tr{{"t", "u1", "u2", "x", "y", "z", "a1", "a2", "ax", "ay", "az"}, {}};
  double n0 = -1.0, drift = 0.0;
  for (const auto& p : traj.samples) {
    const auto d = surface_point(sc.host(), p.u);
    const Tensor& m = a.covector ? d.g_inv : d.g;
    double n2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) n2 += m({i, j}) * p.a[i] * p.a[j];
    if (n0 < 0.0) n0 = n2;
    drift = std::max(drift, std::abs(n2 - n0) / std::max(n0, 1e-300));
    const Vec3 x = sc.host().point(p.u);
    tr.rows.push_back({p.t, p.u[0], p.u[1], x[0], x[1], x[2], p.a[0], p.a[1], p.outer[0], p.outer[1], p.outer[2]});
  }
  r.results["final"] = vec(traj.samples.back().a);
  r.results["final_outer"] = vec(traj.samples.back().outer);
  const bool closed = is_closed(sc);
  r.results["closed"] = closed;
  if (closed && !a.covector) r.results["holonomy_angle"] = holonomy_angle(sc, c.steps);
  r.residuals["norm_drift"] = drift;
  r.tolerances["norm_drift"] = tol_or(c, 1e-7);
  r.failed = drift > tol_or(c, 1e-7);
  r.trajectory = std::move(tr);
  return r;
}

// ---- bonnet ----

struct BonnetArgs {
  std::vector<std::string> vertices;
};

Report bonnet_command(const BonnetArgs& a, const Common& c) {
  const Surface s = load_kind(c, "surface").surface();
  if (a.vertices.size() < 3) throw InputError("--vertex must be given at least three times");
  std::vector<Vec2> v;
  for (const auto& t : a.vertices) {
    const auto p = numbers("--vertex", t, 2);
    v.push_back({p[0], p[1]});
  }
  std::vector<PolygonSide> sides;
  const auto lin = [](double p, double q) {
    return Expression::parse("(" + format_number(p) + ") + (" + format_number(q - p) + ")*t");
  };
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    sides.push_back({SurfaceCurve(s, lin(p[0], q[0]), lin(p[1], q[1]), 0.0, 1.0), false});
  }
  const auto g = gauss_bonnet_check(s, sides, c.steps, c.nodes);
  Report r;
  r.inputs["file"] = c.file;
  Json verts = Json::array();
  for (const auto& p : v) verts.push_back(vec(p));
  r.inputs["vertices"] = verts;
  r.inputs["steps"] = c.steps;
  r.inputs["nodes"] = c.nodes;
  r.results["area_term"] = g.area_term;
  r.results["geodesic_term"] = g.geodesic_term;
  r.results["angle_sum"] = g.angle_sum;
  r.results["exterior_angles"] = vec(g.exterior_angles);
  r.results["total"] = g.area_term + g.geodesic_term + g.angle_sum;
  r.residuals["gauss_bonnet"] = g.residual;
  r.tolerances["gauss_bonnet"] = tol_or(c, 1e-4);
  r.failed = !(g.residual <= tol_or(c, 1e-4));
  return r;
}

// ---- potential ----

struct PotentialArgs {
  std::vector<std::string> field;
  std::vector<std::string> constants;
  std::string kind = "scalar";
  std::string point;
  std::string box = "-1,1";
  int grid = 5;
};

Report potential_command(const PotentialArgs& a, const Common& c) {
  std::vector<Expression> F;
  Bindings k;
  if (!c.file.empty()) {
    if (!a.field.empty()) throw InputError("give either --file or --field, not both");
    const auto def = load_kind(c, "field").field();
    if (def.chart.name() != "cartesian") throw InputError("potentials need a field in the cartesian chart");
    F = def.components;
    k = def.constants;
  } else {
    if (a.field.size() != 3) throw InputError("--field must be given three times");
    for (const auto& s : a.field) F.push_back(Expression::parse(s));
    k = parse_constants(a.constants);
  }
  if (a.point.empty()) throw InputError("--point is required");
  const auto x = numbers("--point", a.point, 3);
  const auto b = numbers("--box", a.box, 2);
  if (!(b[0] < b[1])) throw InputError("--box needs lo < hi");
  if (a.grid < 2) throw InputError("--grid needs at least 2 points per axis");
  SampleBox box{{b[0], b[1]}, {b[0], b[1]}, {b[0], b[1]}, a.grid};
  const double tol = tol_or(c, 1e-8);
  const std::vector<std::string> coords{"x1", "x2", "x3"};

  Bindings at = k;
  for (int i = 0; i < 3; ++i) at[coords[i]] = x[i];
  std::array<double, 3> Fx{};
  for (int i = 0; i < 3; ++i) Fx[i] = F[i].eval(at);

  Report r;
  r.inputs["field"] = Json::array();
  for (const auto& e : F) r.inputs["field"].push_back(e.print());
  r.inputs["kind"] = a.kind;
  r.inputs["point"] = vec(x);
  r.inputs["nodes"] = c.nodes;
  r.results["field_at_point"] = vec(Fx);
  double residual = 0.0;
  if (a.kind == "scalar") {
    const auto phi = scalar_potential(F, coords, k, box, tol, c.nodes);
    const auto g = phi.gradient(x);
    r.results["potential"] = phi.value(x);
    r.results["gradient"] = vec(g);
    for (int i = 0; i < 3; ++i) residual = std::max(residual, std::abs(g[i] - Fx[i]));
    r.residuals["gradient_minus_field"] = residual;
    r.tolerances["gradient_minus_field"] = tol;
  } else if (a.kind == "vector") {
    const auto A = vector_potential(F, coords, k, box, tol, c.nodes);
    const auto J = A.jacobian(x);
    const std::array<double, 3> rot{J[2][1] - J[1][2], J[0][2] - J[2][0], J[1][0] - J[0][1]};
    r.results["potential"] = vec(A.value(x));
    r.results["rotor"] = vec(rot);
    for (int i = 0; i < 3; ++i) residual = std::max(residual, std::abs(rot[i] - Fx[i]));
    r.residuals["rotor_minus_field"] = residual;
    r.tolerances["rotor_minus_field"] = tol;
  } else {
    throw InputError("--kind must be scalar or vector");
  }
  r.failed = !(residual <= tol);
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content) || !f.flush()) throw InputError("cannot write '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential geometry of curves, surfaces and curvilinear coordinates", "geodetica"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  ChartArgs chart_args;
  CurveArgs curve_args;
  SurfaceArgs surface_args;
  GeodesicArgs geodesic_args;
  TransportArgs transport_args;
  BonnetArgs bonnet_args;
  PotentialArgs potential_args;

  const auto add_common = [&](CLI::App* sub, bool with_file) {
    if (with_file) {
      sub->add_option("--file", common.file, "Definition file");
      sub->add_flag("--dump", common.dump, "Print the definition file in canonical form and exit");
    }
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--output", common.output, "Write the report to this file instead of stdout");
    sub->add_option("--steps", common.steps, "Integration steps or samples")->check(CLI::PositiveNumber);
    sub->add_option("--nodes", common.nodes, "Gauss-Legendre nodes per axis")->check(CLI::Range(1, 4096));
    sub->add_option("--tol", common.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  };
  const auto add_plot = [&](CLI::App* sub) {
    sub->add_option("--plot", common.plot, "Write the trajectory as an SVG polyline");
    sub->add_option("--projection", common.projection, "Projection plane for --plot")
        ->check(CLI::IsMember({"xy", "xz", "yz"}));
  };

  auto* chart = app.add_subcommand("chart", "Metric, Christoffel symbols and operators of a chart");
  add_common(chart, true);
  chart->add_option("--builtin", chart_args.builtin, "cartesian, polar, cylindrical or spherical");
  chart->add_option("--point", chart_args.point, "Chart coordinates, comma separated");
  chart->add_option("--show", chart_args.show)->check(CLI::IsMember({"metric", "christoffel", "frame", "all"}));
  chart->add_option("--scalar", chart_args.scalar, "Scalar field: gradient and Laplacian");
  chart->add_option("--field", chart_args.field, "Vector field component (repeat per coordinate)");

  auto* curve = app.add_subcommand("curve", "Frenet frame, length, evolute and kinematics of a space curve");
  add_common(curve, true);
  add_plot(curve);
  curve->add_option("--expr", curve_args.expr, "Coordinate expression (give x, y, z in order)");
  curve->add_option("--domain", curve_args.domain, "Parameter interval a,b");
  curve->add_option("--param", curve_args.parameter, "Parameter name");
  curve->add_option("--const", curve_args.constants, "Constant name=value");
  curve->add_option("--at", curve_args.at, "Parameter value for frenet and kinematics");
  curve->add_option("--interval", curve_args.interval, "Parameter interval for length");
  curve->add_option("--report", curve_args.report)
      ->check(CLI::IsMember({"frenet", "length", "evolute", "kinematics", "all"}));

  auto* surface = app.add_subcommand("surface", "Curvature report and structural residuals of a surface");
  add_common(surface, true);
  surface->add_option("--point", surface_args.point, "Surface parameters u1,u2");
  surface->add_option("--report", surface_args.report)
      ->check(CLI::IsMember({"curvature", "frame", "riemann", "all"}));

  auto* geodesic = app.add_subcommand("geodesic", "Trace a geodesic on a surface");
  add_common(geodesic, true);
  add_plot(geodesic);
  geodesic->add_option("--start", geodesic_args.start, "Start parameters u1,u2");
  geodesic->add_option("--direction", geodesic_args.direction, "Initial direction in parameters");
  geodesic->add_option("--length", geodesic_args.length, "Arc length to trace")->required();

  auto* transport = app.add_subcommand("transport", "Inner parallel transport along a surface curve");
  add_common(transport, true);
  add_plot(transport);
  transport->add_option("--vector", transport_args.vector, "Initial inner components a1,a2");
  transport->add_flag("--covector", transport_args.covector, "Transport lower-index components");

  auto* bonnet = app.add_subcommand("bonnet", "Gauss-Bonnet balance for a parameter polygon");
  add_common(bonnet, true);
  bonnet->add_option("--vertex", bonnet_args.vertices, "Polygon vertex u1,u2 (repeat, in order)");

  auto* potential = app.add_subcommand("potential", "Scalar or vector potential of a Cartesian field");
  add_common(potential, true);
  potential->add_option("--field", potential_args.field, "Field component in x1, x2, x3 (give three)");
  potential->add_option("--const", potential_args.constants, "Constant name=value");
  potential->add_option("--kind", potential_args.kind)->check(CLI::IsMember({"scalar", "vector"}));
  potential->add_option("--point", potential_args.point, "Evaluation point x1,x2,x3");
  potential->add_option("--box", potential_args.box, "Sample cube lo,hi for the field test");
  potential->add_option("--grid", potential_args.grid, "Sample points per axis");

  std::vector<std::string> argv{"geodetica"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    common.tol_given = sub->count("--tol") > 0;
    if (common.dump) {
      if (common.file.empty()) throw InputError("--dump needs --file");
      out << DefinitionFile::load(common.file).dump();
      return kExitOk;
    }
    if (!common.plot.empty() && sub->get_option_no_throw("--plot") == nullptr)
      throw InputError("--plot is not available for " + name);

    const auto t0 = std::chrono::steady_clock::now();
    Report report;
    if (name == "chart")
      report = chart_command(chart_args, common);
    else if (name == "curve")
      report = curve_command(curve_args, common);
    else if (name == "surface")
      report = surface_command(surface_args, common);
    else if (name == "geodesic")
      report = geodesic_command(geodesic_args, common);
    else if (name == "transport")
      report = transport_command(transport_args, common);
    else if (name == "bonnet")
      report = bonnet_command(bonnet_args, common);
    else
      report = potential_command(potential_args, common);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.command = name;
    report.argv = args;

    const std::string text = common.format == "json"  ? render_json(report)
                             : common.format == "csv" ? render_csv(report)
                                                      : render_text(report);
    if (common.output.empty())
      out << text;
    else
      write_file(common.output, text);

    if (!common.plot.empty()) {
      if (!report.trajectory || report.trajectory->rows.empty()) {
        err << "warning: empty trajectory; no plot written\n";
      } else {
        const std::string cx(1, common.projection[0]), cy(1, common.projection[1]);
        write_file(common.plot, render_svg(*report.trajectory, cx, cy));
      }
    }
    if (report.failed) {
      err << "error: residual above tolerance\n";
      return kExitNumeric;
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace geodetica::cli
