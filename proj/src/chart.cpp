#include "geodetica/chart.hpp"

#include <cmath>
#include <numbers>

#include "geodetica/error.hpp"
#include "geodetica/ode.hpp"
#include "geodetica/quadrature.hpp"

namespace geodetica {

namespace {

constexpr double kSingularDet = 1e-12;

std::vector<double> jacobian_of(std::span<const Jet3> x, int n) {
  std::vector<double> J(static_cast<std::size_t>(n * n));
  for (int q = 0; q < n; ++q)
    for (int j = 0; j < n; ++j) J[q * n + j] = x[q].grad[j];
  return J;
}

// Sign of det J on the cell centres of a coarse grid; nullopt when it
// changes or hits a singular point.
std::optional<int> grid_orientation(const Chart& chart) {
  const int n = chart.dim();
  constexpr int per_axis = 4;
  int total = 1;
  for (int k = 0; k < n; ++k) total *= per_axis;
  std::optional<int> sign;
  std::vector<double> u(n);
  for (int cell = 0; cell < total; ++cell) {
    int rest = cell;
    for (int k = 0; k < n; ++k) {
      const auto& iv = chart.box()[k];
      const double lo = std::max(iv.lo, -1e3), hi = std::min(iv.hi, 1e3);
      u[k] = lo + (rest % per_axis + 0.5) / per_axis * (hi - lo);
      rest /= per_axis;
    }
    double det = 0.0;
    try {
      const auto jets = chart.map_jets(u, 1);
      det = determinant(n, jacobian_of(jets, n));
    } catch (const NumericError&) {
      return std::nullopt;
    }
    if (std::abs(det) < kSingularDet || !std::isfinite(det)) return std::nullopt;
    const int s = det > 0 ? 1 : -1;
    if (sign && *sign != s) return std::nullopt;
    sign = s;
  }
  return sign;
}

std::array<double, 3> to_array3(std::span<const double> v) {
  std::array<double, 3> a{};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) a[i] = v[i];
  return a;
}

}  // namespace

Chart::Chart(std::string name, std::vector<std::string> coords, std::vector<Expression> maps,
             std::vector<Interval> box, Bindings constants, std::optional<int> declared_orientation)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      maps_(std::move(maps)),
      box_(std::move(box)),
      constants_(std::move(constants)) {
  const int n = dim();
  if (n != 2 && n != 3) throw ShapeError("chart needs 2 or 3 coordinates");
  if (static_cast<int>(maps_.size()) != n) throw ShapeError("chart needs one map per coordinate");
  if (static_cast<int>(box_.size()) != n) throw ShapeError("chart box needs one interval per coordinate");
  for (const auto& iv : box_)
    if (!(iv.lo < iv.hi)) throw ShapeError("chart box interval is empty");
  for (const auto& c : coords_)
    if (!is_valid_variable_name(c)) throw InputError("invalid coordinate name '" + c + "'");
  for (const auto& m : maps_) {
    const auto unbound = unbound_names(m, coords_, constants_);
    if (!unbound.empty()) throw UnboundVariable(unbound);
  }
  if (declared_orientation) {
    if (*declared_orientation != 1 && *declared_orientation != -1)
      throw InputError("orientation must be +1 or -1");
    orientation_ = declared_orientation;
  } else {
    orientation_ = grid_orientation(*this);
  }
}

Chart Chart::builtin(std::string_view name) {
  constexpr double big = 1e6;
  constexpr double pi = std::numbers::pi;
  auto P = [](const char* s) { return Expression::parse(s); };
  if (name == "cartesian")
    return Chart("cartesian", {"x1", "x2", "x3"}, {P("x1"), P("x2"), P("x3")},
                 {{-big, big}, {-big, big}, {-big, big}}, {}, 1);
  if (name == "polar")
    return Chart("polar", {"rho", "phi"}, {P("rho*cos(phi)"), P("rho*sin(phi)")},
                 {{0.0, big}, {-big, big}}, {}, 1);
  if (name == "cylindrical")
    return Chart("cylindrical", {"rho", "phi", "h"},
                 {P("rho*cos(phi)"), P("rho*sin(phi)"), P("h")},
                 {{0.0, big}, {-big, big}, {-big, big}}, {}, 1);
  if (name == "spherical")
    return Chart("spherical", {"rho", "theta", "phi"},
                 {P("rho*sin(theta)*cos(phi)"), P("rho*sin(theta)*sin(phi)"), P("rho*cos(theta)")},
                 {{0.0, big}, {0.0, pi}, {-big, big}}, {}, 1);
  throw InputError("unknown built-in chart '" + std::string(name) + "'");
}

int Chart::orientation() const {
  if (!orientation_) throw OrientationUndeclared("chart '" + name_ + "' has no declared orientation");
  return *orientation_;
}

std::vector<Jet3> Chart::map_jets(std::span<const double> u, int order) const {
  const int n = dim();
  if (static_cast<int>(u.size()) != n) throw ShapeError("point has wrong number of coordinates");
  for (int k = 0; k < n; ++k)
    if (!box_[k].contains(u[k]))
      throw OutOfDomain("coordinate " + coords_[k] + " = " + std::to_string(u[k]) +
                        " is outside the chart box");
  std::vector<Jet3> out;
  out.reserve(n);
  for (const auto& m : maps_) out.push_back(m.eval_jet(coords_, u, order, constants_));
  return out;
}

std::vector<double> Chart::to_cartesian(std::span<const double> u) const {
  const auto jets = map_jets(u, 0);
  std::vector<double> x;
  for (const auto& j : jets) x.push_back(j.value);
  return x;
}

void Chart::check_regular(std::span<const double> u) const {
  const int n = dim();
  const auto x = map_jets(u, 2);
  const auto J = jacobian_of(x, n);
  const double det = determinant(n, J);
  if (!(std::abs(det) >= kSingularDet))
    throw SingularPoint("Jacobi matrix of chart '" + name_ + "' is singular at this point");
  // d(det J)/du^k = det J * tr(J^-1 dJ/du^k); |det| / |grad det| estimates
  // the distance to the singular locus.
  const auto Ji = invert(n, J);
  double grad2 = 0.0;
  for (int k = 0; k < n; ++k) {
    double tr = 0.0;
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) tr += Ji[j * n + q] * x[q].hess[j][k];
    grad2 += (det * tr) * (det * tr);
  }
  if (grad2 > 0.0 && std::abs(det) / std::sqrt(grad2) < margin_)
    throw SingularPoint("point lies within the exclusion margin of a singular locus of chart '" +
                        name_ + "'");
}

ChartPointData frame(const Chart& chart, std::span<const double> u) {
  chart.check_regular(u);
  const int n = chart.dim();
  const auto x = chart.map_jets(u, 2);
  const auto geo = local_geometry(x, n);
  ChartPointData d;
  d.dim = n;
  d.jacobian = jacobian_of(x, n);
  d.det_jacobian = determinant(n, d.jacobian);
  d.inverse_jacobian = invert(n, d.jacobian);
  d.frame.assign(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < n; ++q) d.frame[j][q] = x[q].grad[j];
  d.g = Tensor(n, 0, 2);
  d.g_inv = Tensor(n, 2, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      d.g({i, j}) = geo.g[i][j];
      d.g_inv({i, j}) = geo.g_inv[i][j];
    }
  d.gamma = geo.gamma;
  return d;
}

Tensor covariant_derivative(const TensorField& field, const Chart& chart,
                            std::span<const double> u) {
  if (field.dim != chart.dim()) throw ShapeError("field and chart dimensions differ");
  const auto pd = frame(chart, u);
  const auto fj = eval_field(field, chart.coords(), u, chart.constants());
  return covariant_derivative(fj.value, fj.partial, pd.gamma);
}

std::vector<TransportSample> transport_parallel(const Chart& chart, const ChartPath& path,
                                                std::span<const double> a0, int steps) {
  const int n = chart.dim();
  if (static_cast<int>(path.u.size()) != n) throw ShapeError("path has wrong number of coordinates");
  if (static_cast<int>(a0.size()) != n) throw ShapeError("vector has wrong number of components");
  if (steps < 1) throw InputError("steps must be positive");
  const std::vector<std::string> tvar{path.parameter};

  auto path_at = [&](double t, std::vector<double>& u, std::vector<double>& udot) {
    u.resize(n);
    udot.resize(n);
    for (int i = 0; i < n; ++i) {
      const Jet3 j = path.u[i].eval_jet(tvar, std::span<const double>(&t, 1), 1, chart.constants());
      u[i] = j.value;
      udot[i] = j.grad[0];
    }
  };

  auto rhs = [&](double t, const std::array<double, 3>& a) {
    std::vector<double> u, udot;
    path_at(t, u, udot);
    const auto pd = frame(chart, u);
    std::array<double, 3> da{};
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += pd.gamma[i][j][k] * udot[j] * a[k];
      da[i] = -s;
    }
    return da;
  };

  std::vector<TransportSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  rk4_integrate<3>(rhs, path.t0, path.t1, to_array3(a0), steps,
                   [&](double t, const std::array<double, 3>& a) {
                     TransportSample s;
                     s.t = t;
                     std::vector<double> udot;
                     path_at(t, s.u, udot);
                     s.a.assign(a.begin(), a.begin() + n);
                     const auto pd = frame(chart, s.u);
                     s.cartesian.assign(n, 0.0);
                     for (int j = 0; j < n; ++j)
                       for (int q = 0; q < n; ++q) s.cartesian[q] += a[j] * pd.frame[j][q];
                     out.push_back(std::move(s));
                   });
  return out;
}

std::vector<LineSample> straight_line_trace(const Chart& chart, std::span<const double> u0,
                                            std::span<const double> udot0, double length,
                                            int steps) {
  const int n = chart.dim();
  if (static_cast<int>(u0.size()) != n || static_cast<int>(udot0.size()) != n)
    throw ShapeError("initial point or velocity has wrong size");
  if (steps < 1) throw InputError("steps must be positive");
  const auto pd0 = frame(chart, u0);
  double speed2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) speed2 += pd0.g({i, j}) * udot0[i] * udot0[j];
  if (!(speed2 > 0.0)) throw InputError("initial velocity is zero");
  const double inv_speed = 1.0 / std::sqrt(speed2);

  std::array<double, 6> y{};
  for (int i = 0; i < n; ++i) {
    y[i] = u0[i];
    y[3 + i] = udot0[i] * inv_speed;
  }
  auto rhs = [&](double, const std::array<double, 6>& s) {
    const auto pd = frame(chart, std::span<const double>(s.data(), n));
    std::array<double, 6> d{};
    for (int i = 0; i < n; ++i) {
      d[i] = s[3 + i];
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) acc += pd.gamma[i][j][k] * s[3 + j] * s[3 + k];
      d[3 + i] = -acc;
    }
    return d;
  };
  std::vector<LineSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  rk4_integrate<6>(rhs, 0.0, length, y, steps, [&](double s, const std::array<double, 6>& st) {
    LineSample ls;
    ls.s = s;
    ls.u.assign(st.begin(), st.begin() + n);
    ls.udot.assign(st.begin() + 3, st.begin() + 3 + n);
    ls.x = chart.to_cartesian(ls.u);
    out.push_back(std::move(ls));
  });
  return out;
}

Tensor gradient(const Chart& chart, const Expression& f, std::span<const double> u) {
  const int n = chart.dim();
  const auto pd = frame(chart, u);
  const Jet3 j = f.eval_jet(chart.coords(), u, 1, chart.constants());
  Tensor out(n, 1, 0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += pd.g_inv({i, k}) * j.grad[k];
    out({i}) = s;
  }
  return out;
}

double divergence(const Chart& chart, const TensorField& F, std::span<const double> u) {
  if (F.upper != 1 || F.lower != 0) throw ShapeError("divergence needs a vector field");
  return contract(covariant_derivative(F, chart, u), 0, 0)({});
}

Tensor rotor(const Chart& chart, const TensorField& F, std::span<const double> u) {
  if (chart.dim() != 3) throw ShapeError("rotor needs a 3-dimensional chart");
  if (F.upper != 1 || F.lower != 0 || F.dim != 3) throw ShapeError("rotor needs a vector field");
  const int xi = chart.orientation();
  const auto pd = frame(chart, u);
  const Tensor nabla = covariant_derivative(F, chart, u);  // nabla({k, q}) = nabla_q F^k
  const Tensor omega =
      volume_tensor(pd.g, xi > 0 ? Orientation::positive : Orientation::negative);
  Tensor out(3, 1, 0);
  for (int m = 0; m < 3; ++m) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const double w = omega({i, j, k});
          if (w == 0.0) continue;
          for (int q = 0; q < 3; ++q)
            s += pd.g_inv({m, i}) * w * pd.g_inv({j, q}) * nabla({k, q});
        }
    out({m}) = s;
  }
  return out;
}

double laplacian(const Chart& chart, const Expression& f, std::span<const double> u) {
  const int n = chart.dim();
  const auto pd = frame(chart, u);
  const Jet3 j = f.eval_jet(chart.coords(), u, 2, chart.constants());
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double inner = j.hess[a][b];
      for (int k = 0; k < n; ++k) inner -= pd.gamma[k][a][b] * j.grad[k];
      s += pd.g_inv({a, b}) * inner;
    }
  return s;
}

// -- potentials -------------------------------------------------------------

namespace {

void check_potential_inputs(const std::vector<Expression>& F,
                            const std::vector<std::string>& coords, const Bindings& constants) {
  if (F.size() != 3 || coords.size() != 3)
    throw ShapeError("potential reconstruction needs a 3-component field in 3 coordinates");
  for (const auto& e : F) {
    const auto unbound = unbound_names(e, coords, constants);
    if (!unbound.empty()) throw UnboundVariable(unbound);
  }
}

// Jacobian dF[i][k] = dF^i/dx^k at x.
std::array<std::array<double, 3>, 3> field_jacobian(const std::vector<Expression>& F,
                                                    const std::vector<std::string>& coords,
                                                    const Bindings& constants,
                                                    std::span<const double> x) {
  std::array<std::array<double, 3>, 3> d{};
  for (int i = 0; i < 3; ++i) {
    const Jet3 j = F[i].eval_jet(coords, x, 1, constants);
    for (int k = 0; k < 3; ++k) d[i][k] = j.grad[k];
  }
  return d;
}

template <typename Check>
void sweep_grid(const SampleBox& box, Check&& check) {
  const int n = std::max(box.points_per_axis, 2);
  const Interval ivs[3] = {box.x1, box.x2, box.x3};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int idx[3] = {a, b, c};
        std::array<double, 3> x{};
        for (int k = 0; k < 3; ++k)
          x[k] = ivs[k].lo + (ivs[k].hi - ivs[k].lo) * idx[k] / (n - 1);
        check(x);
      }
}

double component(const std::vector<Expression>& F, const std::vector<std::string>& coords,
                 const Bindings& constants, int i, double x1, double x2, double x3) {
  Bindings b = constants;
  b[coords[0]] = x1;
  b[coords[1]] = x2;
  b[coords[2]] = x3;
  return F[i].eval(b);
}

std::array<double, 3> component_grad(const std::vector<Expression>& F,
                                     const std::vector<std::string>& coords,
                                     const Bindings& constants, int i, double x1, double x2,
                                     double x3) {
  const double p[3] = {x1, x2, x3};
  const Jet3 j = F[i].eval_jet(coords, p, 1, constants);
  return {j.grad[0], j.grad[1], j.grad[2]};
}

}  // namespace

ScalarPotential::ScalarPotential(std::vector<Expression> F, std::vector<std::string> coords,
                                 Bindings constants, int nodes)
    : F_(std::move(F)), coords_(std::move(coords)), constants_(std::move(constants)), nodes_(nodes) {
  check_potential_inputs(F_, coords_, constants_);
}

double ScalarPotential::value(std::span<const double> x) const {
  if (x.size() != 3) throw ShapeError("potential needs a 3-component point");
  auto f = [&](int i, double a, double b, double c) {
    return component(F_, coords_, constants_, i, a, b, c);
  };
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  return integrate_fixed([&](double t) { return f(0, t, 0.0, 0.0); }, 0.0, x1, nodes_) +
         integrate_fixed([&](double t) { return f(1, x1, t, 0.0); }, 0.0, x2, nodes_) +
         integrate_fixed([&](double t) { return f(2, x1, x2, t); }, 0.0, x3, nodes_);
}

std::array<double, 3> ScalarPotential::gradient(std::span<const double> x) const {
  if (x.size() != 3) throw ShapeError("potential needs a 3-component point");
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  auto g = [&](int i, double a, double b, double c) {
    return component_grad(F_, coords_, constants_, i, a, b, c);
  };
  const double d1 =
      component(F_, coords_, constants_, 0, x1, 0.0, 0.0) +
      integrate_fixed([&](double t) { return g(1, x1, t, 0.0)[0]; }, 0.0, x2, nodes_) +
      integrate_fixed([&](double t) { return g(2, x1, x2, t)[0]; }, 0.0, x3, nodes_);
  const double d2 = component(F_, coords_, constants_, 1, x1, x2, 0.0) +
                    integrate_fixed([&](double t) { return g(2, x1, x2, t)[1]; }, 0.0, x3, nodes_);
  const double d3 = component(F_, coords_, constants_, 2, x1, x2, x3);
  return {d1, d2, d3};
}

VectorPotential::VectorPotential(std::vector<Expression> F, std::vector<std::string> coords,
                                 Bindings constants, int nodes)
    : F_(std::move(F)), coords_(std::move(coords)), constants_(std::move(constants)), nodes_(nodes) {
  check_potential_inputs(F_, coords_, constants_);
}

std::array<double, 3> VectorPotential::value(std::span<const double> x) const {
  if (x.size() != 3) throw ShapeError("potential needs a 3-component point");
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  auto f = [&](int i, double a, double b, double c) {
    return component(F_, coords_, constants_, i, a, b, c);
  };
  const double a1 = integrate_fixed([&](double t) { return f(1, x1, x2, t); }, 0.0, x3, nodes_) -
                    integrate_fixed([&](double t) { return f(2, x1, t, 0.0); }, 0.0, x2, nodes_);
  const double a2 = -integrate_fixed([&](double t) { return f(0, x1, x2, t); }, 0.0, x3, nodes_);
  return {a1, a2, 0.0};
}

std::array<std::array<double, 3>, 3> VectorPotential::jacobian(std::span<const double> x) const {
  if (x.size() != 3) throw ShapeError("potential needs a 3-component point");
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  auto f = [&](int i, double a, double b, double c) {
    return component(F_, coords_, constants_, i, a, b, c);
  };
  auto g = [&](int i, double a, double b, double c) {
    return component_grad(F_, coords_, constants_, i, a, b, c);
  };
  auto I = [&](auto&& h, double upper) { return integrate_fixed(h, 0.0, upper, nodes_); };
  std::array<std::array<double, 3>, 3> d{};
  d[0][0] = I([&](double t) { return g(1, x1, x2, t)[0]; }, x3) -
            I([&](double t) { return g(2, x1, t, 0.0)[0]; }, x2);
  d[0][1] = I([&](double t) { return g(1, x1, x2, t)[1]; }, x3) - f(2, x1, x2, 0.0);
  d[0][2] = f(1, x1, x2, x3);
  d[1][0] = -I([&](double t) { return g(0, x1, x2, t)[0]; }, x3);
  d[1][1] = -I([&](double t) { return g(0, x1, x2, t)[1]; }, x3);
  d[1][2] = -f(0, x1, x2, x3);
  return d;
}

ScalarPotential scalar_potential(std::vector<Expression> F, std::vector<std::string> coords,
                                 Bindings constants, const SampleBox& box, double tol, int nodes) {
  check_potential_inputs(F, coords, constants);
  sweep_grid(box, [&](const std::array<double, 3>& x) {
    const auto d = field_jacobian(F, coords, constants, x);
    double scale = 1.0;
    for (const auto& row : d)
      for (double v : row) scale = std::max(scale, std::abs(v));
    const double r1 = d[2][1] - d[1][2], r2 = d[0][2] - d[2][0], r3 = d[1][0] - d[0][1];
    const double r = std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
    if (r > tol * scale)
      throw NotPotential("field has non-zero rotor (" + std::to_string(r) + ") at (" +
                         std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
                         std::to_string(x[2]) + ")");
  });
  return ScalarPotential(std::move(F), std::move(coords), std::move(constants), nodes);
}

VectorPotential vector_potential(std::vector<Expression> F, std::vector<std::string> coords,
                                 Bindings constants, const SampleBox& box, double tol, int nodes) {
  check_potential_inputs(F, coords, constants);
  sweep_grid(box, [&](const std::array<double, 3>& x) {
    const auto d = field_jacobian(F, coords, constants, x);
    double scale = 1.0;
    for (const auto& row : d)
      for (double v : row) scale = std::max(scale, std::abs(v));
    const double r = std::abs(d[0][0] + d[1][1] + d[2][2]);
    if (r > tol * scale)
      throw NotVorticular("field has non-zero divergence (" + std::to_string(r) + ") at (" +
                          std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
                          std::to_string(x[2]) + ")");
  });
  return VectorPotential(std::move(F), std::move(coords), std::move(constants), nodes);
}

}  // namespace geodetica
