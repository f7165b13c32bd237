#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geodetica/expr.hpp"
#include "geodetica/geometry.hpp"

namespace geodetica {

/// Parametric curve r(t) = (x(t), y(t), z(t)) on [t_min, t_max].
class SpaceCurve {
 public:
  SpaceCurve(Expression x, Expression y, Expression z, double t_min, double t_max,
             Bindings constants = {}, std::string parameter = "t");

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const std::string& parameter() const { return parameter_; }
  const Expression& component(int i) const { return r_[i]; }
  const Bindings& constants() const { return constants_; }

  Vec3 point(double t) const;
  /// derivs[k] = d^k r / dt^k for k = 0..order (order <= 3).
  std::array<Vec3, 4> derivatives(double t, int order = 3) const;

 private:
  std::array<Expression, 3> r_;
  double t_min_;
  double t_max_;
  Bindings constants_;
  std::string parameter_;
};

/// Speeds at or below this count as a stopping point.
inline constexpr double kMinSpeed = 1e-9;
/// Curvature at or below this leaves the normal undefined.
inline constexpr double kMinCurvature = 1e-8;

struct Tangent {
  Vec3 vector;
  bool singular;
};

Tangent tangent(const SpaceCurve& c, double t);

/// Length of the arc over [a, b] (adaptive Gauss-Legendre).
double arc_length(const SpaceCurve& c, double a, double b, double tol = 1e-10);

/// Inverse of the arc-length function s(t), tabulated and interpolated with
/// monotone cubic Hermite segments.
class NaturalParametrization {
 public:
  NaturalParametrization(const SpaceCurve& c, int samples = 1024);

  double length() const { return s_.back(); }
  double t_of_s(double s) const;
  double s_of_t(double t) const;
  Vec3 point(double s) const;
  const SpaceCurve& curve() const { return curve_; }

 private:
  SpaceCurve curve_;
  std::vector<double> t_;
  std::vector<double> s_;
  // Slopes dt/ds at the nodes after monotonicity limiting.
  std::vector<double> m_;
};

struct FrenetData {
  Vec3 tau{};
  Vec3 n{};
  Vec3 b{};
  double k = 0.0;
  double kappa = 0.0;
  double speed = 0.0;
  /// Curvature below the threshold: only tau and k are meaningful.
  bool degenerate = false;
};

/// Throws SingularPoint at a stopping point. A degenerate frame is returned
/// with `degenerate` set rather than thrown.
FrenetData frenet(const SpaceCurve& c, double t, double k_min = kMinCurvature);

/// r + n / k; throws DegenerateCurvature where the frame is degenerate.
Vec3 curvature_center(const SpaceCurve& c, double t, double k_min = kMinCurvature);

struct CurveSample {
  double t;
  Vec3 point;
};

/// Centres of curvature on a uniform t-grid.
std::vector<CurveSample> evolute(const SpaceCurve& c, int samples = 256,
                                 double k_min = kMinCurvature);

/// Evolvent rho(s) = r(s) + (C - s) tau(s) of a planar curve.
class Evolvent {
 public:
  /// Throws NonPlanarCurve when the curve does not lie in a plane.
  Evolvent(const SpaceCurve& c, double C, int samples = 1024);

  double length() const { return natural_.length(); }
  double C() const { return C_; }
  Vec3 point(double s) const;
  /// First and second derivatives of rho with respect to s.
  std::array<Vec3, 2> derivatives(double s) const;
  /// Centre of curvature of the evolvent itself at s.
  Vec3 curvature_center(double s) const;
  std::vector<CurveSample> sample(int count) const;

 private:
  NaturalParametrization natural_;
  double C_;
};

/// Largest distance of sampled curve points from their best-fit plane,
/// and the bounding-box diagonal of the samples.
struct PlanarityResult {
  double max_deviation;
  double diagonal;
  bool planar;
};
PlanarityResult planarity(const SpaceCurve& c, int samples = 257);

struct Kinematics {
  Vec3 v{};
  Vec3 a{};
  Vec3 a_tangential{};
  Vec3 a_centripetal{};
  double speed = 0.0;
  double k = 0.0;
};

Kinematics kinematics(const SpaceCurve& c, double t);

/// Curvature-centre formula from the first two derivatives of any regular
/// parametrization.
Vec3 center_from_derivatives(const Vec3& r, const Vec3& r1, const Vec3& r2);

}  // namespace geodetica
