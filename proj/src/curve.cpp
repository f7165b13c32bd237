#include "geodetica/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "geodetica/error.hpp"
#include "geodetica/quadrature.hpp"

namespace geodetica {

namespace {

double golden_min(const std::function<double(double)>& f, double a, double b, double& fmin) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  fmin = f(t);
  return t;
}

double speed_at(const SpaceCurve& c, double t) { return norm(c.derivatives(t, 1)[1]); }

}  // namespace

SpaceCurve::SpaceCurve(Expression x, Expression y, Expression z, double t_min, double t_max,
                       Bindings constants, std::string parameter)
    : r_{std::move(x), std::move(y), std::move(z)},
      t_min_(t_min),
      t_max_(t_max),
      constants_(std::move(constants)),
      parameter_(std::move(parameter)) {
  if (!(t_min_ < t_max_)) throw InputError("curve domain is empty");
  const std::vector<std::string> vars{parameter_};
  std::vector<std::string> unbound;
  for (const auto& e : r_)
    for (const auto& n : unbound_names(e, vars, constants_))
      if (std::find(unbound.begin(), unbound.end(), n) == unbound.end()) unbound.push_back(n);
  if (!unbound.empty()) throw UnboundVariable(unbound);
}

Vec3 SpaceCurve::point(double t) const { return derivatives(t, 0)[0]; }

std::array<Vec3, 4> SpaceCurve::derivatives(double t, int order) const {
  const std::string vars[1] = {parameter_};
  std::array<Vec3, 4> d{};
  for (int i = 0; i < 3; ++i) {
    const Jet3 j = r_[i].eval_jet(vars, std::span<const double>(&t, 1), order, constants_);
    d[0][i] = j.value;
    d[1][i] = j.grad[0];
    d[2][i] = j.hess[0][0];
    d[3][i] = j.third[0][0][0];
  }
  return d;
}

Tangent tangent(const SpaceCurve& c, double t) {
  const Vec3 v = c.derivatives(t, 1)[1];
  return {v, norm(v) <= kMinSpeed};
}

double arc_length(const SpaceCurve& c, double a, double b, double tol) {
  return integrate_adaptive([&](double t) { return speed_at(c, t); }, a, b, tol).value;
}

// -- natural parameter ------------------------------------------------------

NaturalParametrization::NaturalParametrization(const SpaceCurve& c, int samples) : curve_(c) {
  if (samples < 2) throw InputError("natural parametrization needs at least 2 samples");
  const int n = samples;
  t_.resize(n + 1);
  s_.resize(n + 1);
  m_.resize(n + 1);
  std::vector<double> speed(n + 1);
  const double h = (c.t_max() - c.t_min()) / n;
  for (int i = 0; i <= n; ++i) {
    t_[i] = i == n ? c.t_max() : c.t_min() + i * h;
    speed[i] = speed_at(c, t_[i]);
    if (speed[i] <= kMinSpeed)
      throw SingularPoint("curve has a stopping point at t = " + std::to_string(t_[i]));
  }
  // A stopping point between grid nodes shows up as a local minimum of the
  // speed; refine each one.
  for (int i = 0; i <= n; ++i) {
    const bool left = i == 0 || speed[i] <= speed[i - 1];
    const bool right = i == n || speed[i] <= speed[i + 1];
    if (!(left && right)) continue;
    const double a = t_[std::max(i - 1, 0)], b = t_[std::min(i + 1, n)];
    double fmin = 0.0;
    const double tm = golden_min([&](double t) { return speed_at(c, t); }, a, b, fmin);
    if (fmin <= kMinSpeed)
      throw SingularPoint("curve has a stopping point at t = " + std::to_string(tm));
  }
  s_[0] = 0.0;
  for (int i = 1; i <= n; ++i)
    s_[i] = s_[i - 1] + integrate_fixed([&](double t) { return speed_at(c, t); }, t_[i - 1], t_[i], 16);
  for (int i = 0; i <= n; ++i) m_[i] = 1.0 / speed[i];
  // Fritsch-Carlson limiting keeps each Hermite segment monotone.
  for (int i = 0; i < n; ++i) {
    const double delta = (t_[i + 1] - t_[i]) / (s_[i + 1] - s_[i]);
    const double alpha = m_[i] / delta, beta = m_[i + 1] / delta;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m_[i] = tau * alpha * delta;
      m_[i + 1] = tau * beta * delta;
    }
  }
}

double NaturalParametrization::t_of_s(double s) const {
  if (s <= s_.front()) return t_.front() + (s - s_.front()) * m_.front();
  if (s >= s_.back()) return t_.back() + (s - s_.back()) * m_.back();
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double hs = s_[i + 1] - s_[i];
  const double x = (s - s_[i]) / hs;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * t_[i] + h10 * hs * m_[i] + h01 * t_[i + 1] + h11 * hs * m_[i + 1];
}

double NaturalParametrization::s_of_t(double t) const {
  if (t <= t_.front()) return 0.0;
  if (t >= t_.back()) return s_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  return s_[i] + integrate_fixed([&](double u) { return speed_at(curve_, u); }, t_[i], t, 16);
}

Vec3 NaturalParametrization::point(double s) const { return curve_.point(t_of_s(s)); }

// -- Frenet frame -----------------------------------------------------------

FrenetData frenet(const SpaceCurve& c, double t, double k_min) {
  const auto d = c.derivatives(t, 3);
  FrenetData f;
  f.speed = norm(d[1]);
  if (f.speed <= kMinSpeed)
    throw SingularPoint("curve has a stopping point at t = " + std::to_string(t));
  f.tau = (1.0 / f.speed) * d[1];
  const Vec3 c12 = cross(d[1], d[2]);
  const double c12n = norm(c12);
  f.k = c12n / (f.speed * f.speed * f.speed);
  if (f.k <= k_min) {
    f.degenerate = true;
    return f;
  }
  f.b = (1.0 / c12n) * c12;
  f.n = cross(f.b, f.tau);
  f.kappa = dot(c12, d[3]) / (c12n * c12n);
  return f;
}

Vec3 center_from_derivatives(const Vec3& r, const Vec3& r1, const Vec3& r2) {
  const double v2 = dot(r1, r1);
  const Vec3 c = cross(r1, r2);
  const double c2 = dot(c, c);
  if (!(c2 > 0.0)) throw DegenerateCurvature("curvature vanishes; no curvature centre");
  return r + (v2 / c2) * (v2 * r2 - dot(r1, r2) * r1);
}

Vec3 curvature_center(const SpaceCurve& c, double t, double k_min) {
  const FrenetData f = frenet(c, t, k_min);
  if (f.degenerate)
    throw DegenerateCurvature("curvature below threshold at t = " + std::to_string(t));
  return c.point(t) + (1.0 / f.k) * f.n;
}

std::vector<CurveSample> evolute(const SpaceCurve& c, int samples, double k_min) {
  if (samples < 2) throw InputError("evolute needs at least 2 samples");
  std::vector<CurveSample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double t =
        i == samples - 1 ? c.t_max() : c.t_min() + (c.t_max() - c.t_min()) * i / (samples - 1);
    out.push_back({t, curvature_center(c, t, k_min)});
  }
  return out;
}

// -- evolvent ---------------------------------------------------------------

PlanarityResult planarity(const SpaceCurve& c, int samples) {
  std::vector<Vec3> pts;
  pts.reserve(samples);
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < samples; ++i) {
    const double t = c.t_min() + (c.t_max() - c.t_min()) * i / (samples - 1);
    const Vec3 p = c.point(t);
    pts.push_back(p);
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
    mean += Eigen::Vector3d(p[0], p[1], p[2]);
  }
  mean /= samples;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d = Eigen::Vector3d(p[0], p[1], p[2]) - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  const Eigen::Vector3d normal = es.eigenvectors().col(0);
  double dev = 0.0;
  for (const auto& p : pts)
    dev = std::max(dev, std::abs(normal.dot(Eigen::Vector3d(p[0], p[1], p[2]) - mean)));
  const double diag = norm(hi - lo);
  return {dev, diag, dev <= 1e-8 * diag};
}

Evolvent::Evolvent(const SpaceCurve& c, double C, int samples) : natural_(c, samples), C_(C) {
  const auto p = planarity(c);
  if (!p.planar)
    throw NonPlanarCurve("curve deviates from its best-fit plane by " +
                         std::to_string(p.max_deviation) + "; evolvents need a planar curve");
}

Vec3 Evolvent::point(double s) const {
  const double t = natural_.t_of_s(s);
  const auto d = natural_.curve().derivatives(t, 1);
  const Vec3 tau = (1.0 / norm(d[1])) * d[1];
  return d[0] + (C_ - s) * tau;
}

std::array<Vec3, 2> Evolvent::derivatives(double s) const {
  const double t = natural_.t_of_s(s);
  const auto& c = natural_.curve();
  const FrenetData f = frenet(c, t);
  if (f.degenerate)
    throw DegenerateCurvature("curvature below threshold at s = " + std::to_string(s));
  const auto d = c.derivatives(t, 3);
  // dk/ds from the t-derivatives: k = |r1 x r2| / |r1|^3.
  const Vec3 c12 = cross(d[1], d[2]);
  const double c12n = norm(c12), v = f.speed;
  const double dk_dt =
      dot(c12, cross(d[1], d[3])) / (c12n * v * v * v) - 3.0 * c12n * dot(d[1], d[2]) / std::pow(v, 5);
  const double dk = dk_dt / v;
  const double w = C_ - s;
  // rho' = (C - s) k n; rho'' = -k n + (C - s)(k' n + k (-k tau + kappa b)).
  const Vec3 d1 = (w * f.k) * f.n;
  const Vec3 d2 = (-f.k) * f.n + w * (dk * f.n + f.k * ((-f.k) * f.tau + f.kappa * f.b));
  return {d1, d2};
}

Vec3 Evolvent::curvature_center(double s) const {
  const auto d = derivatives(s);
  return center_from_derivatives(point(s), d[0], d[1]);
}

std::vector<CurveSample> Evolvent::sample(int count) const {
  if (count < 2) throw InputError("evolvent needs at least 2 samples");
  std::vector<CurveSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double s = length() * i / (count - 1);
    out.push_back({s, point(s)});
  }
  return out;
}

// -- kinematics -------------------------------------------------------------

Kinematics kinematics(const SpaceCurve& c, double t) {
  const FrenetData f = frenet(c, t);
  const auto d = c.derivatives(t, 2);
  Kinematics k;
  k.v = d[1];
  k.a = d[2];
  k.speed = f.speed;
  k.k = f.k;
  k.a_tangential = (dot(k.v, k.a) / k.speed) * f.tau;
  if (!f.degenerate) k.a_centripetal = (f.k * k.speed * k.speed) * f.n;
  return k;
}

}  // namespace geodetica
