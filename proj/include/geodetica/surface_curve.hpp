#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "geodetica/surface.hpp"

namespace geodetica {

using Vec2 = std::array<double, 2>;

/// Curve u(t) = (u1(t), u2(t)) on a host surface, t in [t_min, t_max].
class SurfaceCurve {
 public:
  /// The parameter expressions may use `parameter` and the host constants.
  SurfaceCurve(Surface host, Expression u1, Expression u2, double t_min, double t_max,
               std::string parameter = "t");

  const Surface& host() const { return host_; }
  const Expression& component(int i) const { return u_[i]; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const std::string& parameter() const { return parameter_; }
  bool is_reversed() const { return reversed_; }

  /// Same image traversed backwards over the same parameter interval.
  SurfaceCurve reversed() const;

  Vec2 u(double t) const;
  /// d[k] = d^k u / dt^k for k = 0..order (order <= 3).
  std::array<Vec2, 4> derivatives(double t, int order = 2) const;

 private:
  Surface host_;
  std::array<Expression, 2> u_;
  double t_min_;
  double t_max_;
  std::string parameter_;
  bool reversed_ = false;
};

struct InnerTangent {
  Vec2 inner{};
  Vec3 outer{};
};

/// Throws OutOfDomain when u(t) leaves the host box.
InnerTangent inner_tangent(const SurfaceCurve& c, double t);

/// Point, velocity and acceleration of the embedded curve r(u(t)).
std::array<Vec3, 3> embedded_derivatives(const SurfaceCurve& c, double t);

/// Length of the image of [a, b] measured with the first quadratic form.
double length_on_surface(const SurfaceCurve& c, double a, double b, double tol = 1e-10);

struct CurveCurvatures {
  double k = 0.0;
  /// b(u', u') / g(u', u'); sign relative to the host normal.
  double k_norm = 0.0;
  /// Positive when the curve bends to the left of travel.
  double k_geod = 0.0;
  double speed = 0.0;
  Vec3 tau{};
  /// Unit inner normal pointing left of travel.
  Vec3 n_inner{};
};

/// Throws SingularPoint at a stopping point of the curve.
CurveCurvatures curve_curvatures(const SurfaceCurve& c, double t);

/// |b(a, a)| <= 1e-10 |b| g(a, a). Throws InputError for a = 0.
bool is_asymptotic(const Surface& s, const Vec2& u, const Vec2& a);

/// Real roots of b(a, a) = 0 as unit inner vectors; empty at elliptic points.
std::vector<Vec2> asymptotic_directions(const Surface& s, const Vec2& u);

struct GeodesicSample {
  double s = 0.0;
  Vec2 u{};
  Vec2 udot{};
  Vec3 x{};
};

/// Geodesic from u0 in the direction udot0 (rescaled to unit speed), traced
/// over the given arc length with fixed-step RK4.
std::vector<GeodesicSample> geodesic_trace(const Surface& s, const Vec2& u0, const Vec2& udot0,
                                           double length, int steps = 1000);

struct InnerTransportSample {
  double t = 0.0;
  Vec2 u{};
  Vec2 a{};
  /// a^k E_k, or a_k E^k for a transported covector.
  Vec3 outer{};
};

struct TransportTrajectory {
  std::vector<InnerTransportSample> samples;
};

/// Parallel transport of the inner vector a0 along the whole curve.
TransportTrajectory inner_transport(const SurfaceCurve& c, const Vec2& a0, int steps = 1000);
/// Parallel transport of an inner covector.
TransportTrajectory inner_transport_covector(const SurfaceCurve& c, const Vec2& a0,
                                             int steps = 1000);

/// A curve counts as closed when its end parameters agree within 1e-9, or
/// when the end points and both frame vectors agree (periodic coordinates).
bool is_closed(const SurfaceCurve& c, double tol = 1e-9);

/// Rotation of a vector transported once around a closed curve, counted
/// counterclockwise and unwrapped by following the angle to the tangent.
/// Throws DomainError when the curve is not closed.
double holonomy_angle(const SurfaceCurve& c, int steps = 2000);

struct RectangleRegion {
  Interval u1;
  Interval u2;
};
struct TriangleRegion {
  std::array<Vec2, 3> vertices;
};
using Region = std::variant<RectangleRegion, TriangleRegion>;

/// Integral of K sqrt(det g) over the region (Gauss-Legendre, nodes^2 points).
double holonomy_by_area(const Surface& s, const Region& region, int nodes = 64);

/// Gaussian curvature from the two quadratic forms.
double gaussian_curvature(const SurfacePointData& d);

struct PolygonSide {
  SurfaceCurve curve;
  /// Traverse the side from t_max to t_min.
  bool reversed = false;
};

struct GaussBonnetReport {
  double area_term = 0.0;
  double geodesic_term = 0.0;
  double angle_sum = 0.0;
  /// |area + geodesic + angles - 2 pi r| with r = +1 for a counterclockwise
  /// boundary and -1 for a clockwise one.
  double residual = 0.0;
  std::vector<double> exterior_angles;
};

/// Sides must be straight in the parameter plane so that the enclosed
/// region is a fan of parameter triangles. Throws DomainError for an open
/// polygon or curved sides.
GaussBonnetReport gauss_bonnet_check(const Surface& s, const std::vector<PolygonSide>& polygon,
                                     int steps = 1000, int nodes = 64);

}  // namespace geodetica
