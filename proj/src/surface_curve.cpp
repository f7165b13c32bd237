#include "geodetica/surface_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geodetica/error.hpp"
#include "geodetica/ode.hpp"
#include "geodetica/quadrature.hpp"

namespace geodetica {

namespace {

constexpr double kMinInnerSpeed = 1e-9;

double form(const Tensor& f, const Vec2& a, const Vec2& b) {
  double v = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v += f({i, j}) * a[i] * b[j];
  return v;
}

Vec3 outer_of(const std::array<Vec3, 2>& E, const Vec2& a) { return a[0] * E[0] + a[1] * E[1]; }

std::array<Vec3, 2> frame_at(const Surface& s, const Vec2& u) {
  const auto x = s.jets(u, 1);
  return {Vec3{x[0].grad[0], x[1].grad[0], x[2].grad[0]},
          Vec3{x[0].grad[1], x[1].grad[1], x[2].grad[1]}};
}

Christoffel christoffel_at(const Surface& s, const Vec2& u) {
  const auto x = s.jets(u, 2);
  return local_geometry(x, 2).gamma;
}

}  // namespace

SurfaceCurve::SurfaceCurve(Surface host, Expression u1, Expression u2, double t_min, double t_max,
                           std::string parameter)
    : host_(std::move(host)),
      u_{std::move(u1), std::move(u2)},
      t_min_(t_min),
      t_max_(t_max),
      parameter_(std::move(parameter)) {
  if (!(t_min_ < t_max_)) throw ShapeError("curve parameter interval is empty");
  if (!is_valid_variable_name(parameter_))
    throw InputError("invalid parameter name '" + parameter_ + "'");
  std::vector<std::string> unbound;
  const std::vector<std::string> vars{parameter_};
  for (const auto& e : u_)
    for (const auto& n : unbound_names(e, vars, host_.constants()))
      if (std::find(unbound.begin(), unbound.end(), n) == unbound.end()) unbound.push_back(n);
  if (!unbound.empty()) throw UnboundVariable(unbound);
}

SurfaceCurve SurfaceCurve::reversed() const {
  SurfaceCurve out = *this;
  out.reversed_ = !reversed_;
  return out;
}

Vec2 SurfaceCurve::u(double t) const {
  const auto d = derivatives(t, 0);
  return d[0];
}

std::array<Vec2, 4> SurfaceCurve::derivatives(double t, int order) const {
  const double tt = reversed_ ? t_min_ + t_max_ - t : t;
  const std::vector<std::string> vars{parameter_};
  const double p[1] = {tt};
  std::array<Vec2, 4> d{};
  for (int i = 0; i < 2; ++i) {
    const Jet3 j = u_[i].eval_jet(vars, p, order, host_.constants());
    d[0][i] = j.value;
    d[1][i] = j.grad[0];
    d[2][i] = j.hess[0][0];
    d[3][i] = j.third[0][0][0];
  }
  if (reversed_)
    for (int i = 0; i < 2; ++i) {
      d[1][i] = -d[1][i];
      d[3][i] = -d[3][i];
    }
  return d;
}

InnerTangent inner_tangent(const SurfaceCurve& c, double t) {
  const auto d = c.derivatives(t, 1);
  const auto E = frame_at(c.host(), d[0]);
  return {d[1], outer_of(E, d[1])};
}

std::array<Vec3, 3> embedded_derivatives(const SurfaceCurve& c, double t) {
  const auto d = c.derivatives(t, 2);
  const auto x = c.host().jets(d[0], 2);
  std::array<Vec3, 3> out{};
  for (int q = 0; q < 3; ++q) {
    out[0][q] = x[q].value;
    double v = 0.0, a = 0.0;
    for (int i = 0; i < 2; ++i) {
      v += x[q].grad[i] * d[1][i];
      a += x[q].grad[i] * d[2][i];
      for (int j = 0; j < 2; ++j) a += x[q].hess[i][j] * d[1][i] * d[1][j];
    }
    out[1][q] = v;
    out[2][q] = a;
  }
  return out;
}

double length_on_surface(const SurfaceCurve& c, double a, double b, double tol) {
  if (a < c.t_min() || b > c.t_max() || a > b)
    throw DomainError("length interval is outside the curve domain");
  if (a == b) return 0.0;
  auto speed = [&](double t) {
    const auto d = c.derivatives(t, 1);
    const auto E = frame_at(c.host(), d[0]);
    return norm(outer_of(E, d[1]));
  };
  return integrate_adaptive(speed, a, b, tol).value;
}

CurveCurvatures curve_curvatures(const SurfaceCurve& c, double t) {
  const auto d = c.derivatives(t, 2);
  const SurfacePointData p = surface_point(c.host(), d[0]);
  const Vec2& ud = d[1];
  const double v2 = form(p.g, ud, ud);
  const double v = std::sqrt(v2);
  if (!(v > kMinInnerSpeed)) throw SingularPoint("curve has zero speed at this point");

  Vec2 A{};
  for (int k = 0; k < 2; ++k) {
    A[k] = d[2][k];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A[k] += p.gamma[k][i][j] * ud[i] * ud[j];
  }
  // Covariant derivative of the unit tangent with respect to arc length.
  const double vdot = form(p.g, ud, A) / v;
  Vec2 w{};
  for (int k = 0; k < 2; ++k) w[k] = (A[k] - vdot / v * ud[k]) / v2;

  const Vec2 tau{ud[0] / v, ud[1] / v};
  Vec2 nu{};
  for (int k = 0; k < 2; ++k)
    for (int q = 0; q < 2; ++q)
      for (int i = 0; i < 2; ++i) nu[k] += p.g_inv({k, q}) * p.omega({i, q}) * tau[i];

  CurveCurvatures out;
  out.speed = v;
  out.k_norm = form(p.b, ud, ud) / v2;
  out.k_geod = form(p.g, w, nu);
  out.k = std::hypot(out.k_geod, out.k_norm);
  out.tau = outer_of(p.E, tau);
  out.n_inner = outer_of(p.E, nu);
  return out;
}

bool is_asymptotic(const Surface& s, const Vec2& u, const Vec2& a) {
  if (a[0] == 0.0 && a[1] == 0.0) throw InputError("asymptotic test needs a nonzero vector");
  const SurfacePointData p = surface_point(s, u);
  double bn = 0.0;
  for (const double v : p.b.components()) bn += v * v;
  return std::abs(form(p.b, a, a)) <= 1e-10 * std::sqrt(bn) * form(p.g, a, a);
}

std::vector<Vec2> asymptotic_directions(const Surface& s, const Vec2& u) {
  const SurfacePointData p = surface_point(s, u);
  const double b11 = p.b({0, 0}), b12 = p.b({0, 1}), b22 = p.b({1, 1});
  const double scale = std::max({std::abs(b11), std::abs(b12), std::abs(b22)});
  if (scale == 0.0) throw DegenerateCurvature("every direction is asymptotic at a planar point");
  const double disc = b12 * b12 - b11 * b22;
  const double tol = 1e-12 * scale * scale;
  if (disc < -tol) return {};
  const double root = disc > tol ? std::sqrt(disc) : 0.0;
  std::vector<Vec2> raw;
  for (const double sgn : {1.0, -1.0}) {
    if (std::abs(b22) >= std::abs(b11))
      raw.push_back({b22, -b12 + sgn * root});  // (1, lambda) scaled by b22
    else
      raw.push_back({-b12 + sgn * root, b11});  // (mu, 1) scaled by b11
    if (root == 0.0) break;
  }
  for (auto& a : raw) {
    const double n = std::sqrt(form(p.g, a, a));
    a = {a[0] / n, a[1] / n};
  }
  return raw;
}

std::vector<GeodesicSample> geodesic_trace(const Surface& s, const Vec2& u0, const Vec2& udot0,
                                           double length, int steps) {
  if (steps < 1) throw InputError("steps must be positive");
  if (!(length > 0.0)) throw InputError("geodesic length must be positive");
  const SurfacePointData p0 = surface_point(s, u0);
  const double v0 = std::sqrt(form(p0.g, udot0, udot0));
  if (!(v0 > 0.0)) throw InputError("initial direction must be nonzero");

  auto rhs = [&](double, const std::array<double, 4>& y) {
    const Christoffel G = christoffel_at(s, {y[0], y[1]});
    std::array<double, 4> f{y[2], y[3], 0.0, 0.0};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f[2 + k] -= G[k][i][j] * y[2 + i] * y[2 + j];
    return f;
  };
  std::vector<GeodesicSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  const std::array<double, 4> y0{u0[0], u0[1], udot0[0] / v0, udot0[1] / v0};
  rk4_integrate(rhs, 0.0, length, y0, steps, [&](double t, const std::array<double, 4>& y) {
    const Vec2 u{y[0], y[1]};
    out.push_back({t, u, {y[2], y[3]}, s.point(u)});
  });
  return out;
}

namespace {

TransportTrajectory transport(const SurfaceCurve& c, const Vec2& a0, int steps, bool covector) {
  if (steps < 1) throw InputError("steps must be positive");
  const Surface& s = c.host();
  auto rhs = [&](double t, const std::array<double, 2>& a) {
    const auto d = c.derivatives(t, 1);
    const Christoffel G = christoffel_at(s, d[0]);
    std::array<double, 2> f{};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (covector)
            f[k] += G[j][i][k] * d[1][i] * a[j];
          else
            f[k] -= G[k][i][j] * d[1][i] * a[j];
        }
    return f;
  };
  TransportTrajectory out;
  out.samples.reserve(static_cast<std::size_t>(steps) + 1);
  rk4_integrate(rhs, c.t_min(), c.t_max(), std::array<double, 2>{a0[0], a0[1]}, steps,
                [&](double t, const std::array<double, 2>& a) {
                  const Vec2 u = c.u(t);
                  const Vec2 av{a[0], a[1]};
                  Vec3 outer{};
                  if (covector) {
                    const SurfacePointData p = surface_point(s, u);
                    Vec2 up{};
                    for (int k = 0; k < 2; ++k)
                      for (int j = 0; j < 2; ++j) up[k] += p.g_inv({k, j}) * av[j];
                    outer = outer_of(p.E, up);
                  } else {
                    outer = outer_of(frame_at(s, u), av);
                  }
                  out.samples.push_back({t, u, av, outer});
                });
  return out;
}

}  // namespace

TransportTrajectory inner_transport(const SurfaceCurve& c, const Vec2& a0, int steps) {
  return transport(c, a0, steps, false);
}

TransportTrajectory inner_transport_covector(const SurfaceCurve& c, const Vec2& a0, int steps) {
  return transport(c, a0, steps, true);
}

bool is_closed(const SurfaceCurve& c, double tol) {
  const Vec2 a = c.u(c.t_min()), b = c.u(c.t_max());
  if (std::abs(a[0] - b[0]) < tol && std::abs(a[1] - b[1]) < tol) return true;
  const Surface& s = c.host();
  if (norm(s.point(a) - s.point(b)) >= tol) return false;
  const auto Ea = frame_at(s, a), Eb = frame_at(s, b);
  return norm(Ea[0] - Eb[0]) < tol && norm(Ea[1] - Eb[1]) < tol;
}

double holonomy_angle(const SurfaceCurve& c, int steps) {
  if (!is_closed(c)) throw DomainError("holonomy needs a closed curve");
  const Surface& s = c.host();
  const auto d0 = c.derivatives(c.t_min(), 1);
  const SurfacePointData p0 = surface_point(s, d0[0]);
  const double v0 = std::sqrt(form(p0.g, d0[1], d0[1]));
  if (!(v0 > kMinInnerSpeed)) throw SingularPoint("curve has zero speed at its start");
  const Vec2 a0{d0[1][0] / v0, d0[1][1] / v0};

  const TransportTrajectory tr = inner_transport(c, a0, steps);
  // Angle from the tangent to the transported vector, followed continuously.
  double prev = 0.0, total = 0.0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& smp = tr.samples[i];
    const auto d = c.derivatives(smp.t, 1);
    const SurfacePointData p = surface_point(s, smp.u);
    const double ang = std::atan2(form(p.omega, d[1], smp.a), form(p.g, d[1], smp.a));
    if (i > 0) total += std::remainder(ang - prev, 2.0 * std::numbers::pi);
    prev = ang;
  }
  return 2.0 * std::numbers::pi + total;
}

double gaussian_curvature(const SurfacePointData& d) {
  const double E = d.g({0, 0}), F = d.g({0, 1}), G = d.g({1, 1});
  const double L = d.b({0, 0}), M = d.b({0, 1}), N = d.b({1, 1});
  return (L * N - M * M) / (E * G - F * F);
}

double holonomy_by_area(const Surface& s, const Region& region, int nodes) {
  auto f = [&](double u1, double u2) {
    const Vec2 u{u1, u2};
    const SurfacePointData d = surface_point(s, u);
    return gaussian_curvature(d) * std::sqrt(d.det_g);
  };
  if (const auto* r = std::get_if<RectangleRegion>(&region))
    return integrate_rectangle(f, r->u1.lo, r->u1.hi, r->u2.lo, r->u2.hi, nodes);
  const auto& tri = std::get<TriangleRegion>(region);
  return integrate_triangle(f, {tri.vertices[0], tri.vertices[1], tri.vertices[2]}, nodes);
}

GaussBonnetReport gauss_bonnet_check(const Surface& s, const std::vector<PolygonSide>& polygon,
                                     int steps, int nodes) {
  const std::size_t n = polygon.size();
  if (n < 3) throw DomainError("a polygon needs at least three sides");
  if (steps < 1) throw InputError("steps must be positive");
  std::vector<SurfaceCurve> sides;
  for (const auto& side : polygon) sides.push_back(side.reversed ? side.curve.reversed() : side.curve);

  std::vector<Vec2> vertex(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SurfaceCurve& c = sides[i];
    const Vec2 a = c.u(c.t_min()), b = c.u(c.t_max());
    const Vec2 next = sides[(i + 1) % n].u(sides[(i + 1) % n].t_min());
    if (std::hypot(b[0] - next[0], b[1] - next[1]) >= 1e-8)
      throw DomainError("polygon side " + std::to_string(i + 1) + " does not meet the next side");
    vertex[i] = a;
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    for (const double f : {0.25, 0.5, 0.75}) {
      const Vec2 m = c.u(c.t_min() + f * (c.t_max() - c.t_min()));
      const double off = std::abs((m[0] - a[0]) * (b[1] - a[1]) - (m[1] - a[1]) * (b[0] - a[0]));
      if (off > 1e-9 * std::max(1.0, len) * std::max(1.0, len))
        throw DomainError("polygon side " + std::to_string(i + 1) +
                          " is not straight in the parameter plane");
    }
  }

  GaussBonnetReport rep;
  double signed_param_area = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 &a = vertex[0], &b = vertex[i], &c = vertex[i + 1];
    const double cr = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    signed_param_area += 0.5 * cr;
    if (cr == 0.0) continue;
    const double sgn = cr > 0 ? 1.0 : -1.0;
    rep.area_term += sgn * holonomy_by_area(s, TriangleRegion{{a, b, c}}, nodes);
  }
  if (signed_param_area == 0.0) throw DomainError("polygon encloses no area");
  rep.area_term *= s.orientation();
  const double r = signed_param_area * s.orientation() > 0 ? 1.0 : -1.0;

  for (const auto& c : sides) {
    const double h = (c.t_max() - c.t_min()) / steps;
    for (int k = 0; k < steps; ++k) {
      const double a = c.t_min() + k * h;
      rep.geodesic_term += integrate_fixed(
          [&](double t) {
            const CurveCurvatures cc = curve_curvatures(c, t);
            return cc.k_geod * cc.speed;
          },
          a, a + h, 4);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const SurfaceCurve& in = sides[i];
    const SurfaceCurve& out = sides[(i + 1) % n];
    const Vec2 t_in = in.derivatives(in.t_max(), 1)[1];
    const Vec2 t_out = out.derivatives(out.t_min(), 1)[1];
    const SurfacePointData p = surface_point(s, vertex[(i + 1) % n]);
    const double ang = std::atan2(form(p.omega, t_in, t_out), form(p.g, t_in, t_out));
    rep.exterior_angles.push_back(ang);
    rep.angle_sum += ang;
  }
  rep.residual =
      std::abs(rep.area_term + rep.geodesic_term + rep.angle_sum - 2.0 * std::numbers::pi * r);
  return rep;
}

}  // namespace geodetica
