#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "geodetica/chart.hpp"
#include "geodetica/expr.hpp"
#include "geodetica/geometry.hpp"
#include "geodetica/tensor.hpp"

namespace geodetica {

/// Parametric surface r(u1, u2) in Euclidean 3-space.
class Surface {
 public:
  Surface(std::array<std::string, 2> params, std::array<Expression, 3> maps,
          std::array<Interval, 2> box, int orientation = 1, Bindings constants = {});

  const std::array<std::string, 2>& params() const { return params_; }
  const std::array<Expression, 3>& maps() const { return maps_; }
  const std::array<Interval, 2>& box() const { return box_; }
  int orientation() const { return orientation_; }
  const Bindings& constants() const { return constants_; }

  Surface with_orientation(int orientation) const;

  /// Throws OutOfDomain outside the parameter box.
  std::array<Jet3, 3> jets(std::span<const double> u, int order) const;
  Vec3 point(std::span<const double> u) const;

 private:
  std::array<std::string, 2> params_;
  std::array<Expression, 3> maps_;
  std::array<Interval, 2> box_;
  int orientation_;
  Bindings constants_;
};

struct SurfacePointData {
  std::array<Vec3, 2> E{};
  Vec3 n{};
  Tensor g;
  Tensor g_inv;
  double det_g = 0.0;
  /// Second fundamental form b_ij = (d2r/du^i du^j | n).
  Tensor b;
  Christoffel gamma{};
  /// Area tensor xi sqrt(det g) d_ij.
  Tensor omega;

  // Filled when derivatives are requested.
  bool has_derivatives = false;
  ChristoffelDerivative d_gamma{};
  /// db[k]({i, j}) = d b_ij / du^k.
  std::array<Tensor, 2> db;
};

/// Throws SingularPoint where |E1 x E2| < 1e-12.
SurfacePointData surface_point(const Surface& s, std::span<const double> u,
                               bool with_derivatives = false);

enum class PointClass { elliptic, hyperbolic, parabolic };
const char* point_class_name(PointClass c);

struct CurvatureReport {
  double k1 = 0.0;
  double k2 = 0.0;
  /// Trace and determinant of the shape operator.
  double H = 0.0;
  double K = 0.0;
  /// The same invariants from the coefficients of the two forms.
  double H_forms = 0.0;
  double K_forms = 0.0;
  /// Unit principal directions in Cartesian components (k1 first).
  std::array<Vec3, 2> dirs{};
  /// The same directions in surface components.
  std::array<std::array<double, 2>, 2> dirs_inner{};
  bool umbilical = false;
  PointClass point_class = PointClass::parabolic;
  double R_scalar = 0.0;
  double gauss_residual = 0.0;
  double codazzi_residual = 0.0;
  /// Shape operator W(k, i) = b^k_i.
  Tensor shape_operator;
};

CurvatureReport curvature(const Surface& s, std::span<const double> u);

/// R^k_{rij} from the connection and its derivatives; index order (k, r, i, j).
Tensor riemann_tensor(const Surface& s, std::span<const double> u);
/// (R/2)(delta^k_i g_rj - delta^k_j g_ri) with R the scalar curvature.
Tensor curvature_from_scalar(const Surface& s, std::span<const double> u);
/// R_rj = R^k_{rkj}.
Tensor ricci_tensor(const Tensor& riemann);
double scalar_curvature(const Tensor& ricci, const Tensor& g_inv);

/// Covariant derivative of an inner field on the surface; type (r, s+1).
Tensor surface_covariant_derivative(const TensorField& field, const Surface& s,
                                    std::span<const double> u);

}  // namespace geodetica
