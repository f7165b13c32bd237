#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geodetica/expr.hpp"
#include "geodetica/geometry.hpp"
#include "geodetica/tensor.hpp"

namespace geodetica {

struct Interval {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Curvilinear coordinates on Euclidean space: `dim` expressions giving the
/// Cartesian coordinates as functions of the chart coordinates.
///
/// Dimension 3 is the general case; dimension 2 covers the plane (polar
/// coordinates).
class Chart {
 public:
  Chart(std::string name, std::vector<std::string> coords, std::vector<Expression> maps,
        std::vector<Interval> box, Bindings constants = {},
        std::optional<int> declared_orientation = std::nullopt);

  /// "cartesian", "polar", "cylindrical" or "spherical".
  static Chart builtin(std::string_view name);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<Expression>& maps() const { return maps_; }
  const std::vector<Interval>& box() const { return box_; }
  const Bindings& constants() const { return constants_; }

  /// Sign of det(Jacobi); throws OrientationUndeclared when it was neither
  /// declared nor constant over the box.
  int orientation() const;
  bool has_orientation() const { return orientation_.has_value(); }

  /// Half-width of the excluded band around the singular locus.
  double exclusion_margin() const { return margin_; }
  void set_exclusion_margin(double m) { margin_ = m; }

  /// Map jets at u. Throws OutOfDomain outside the box.
  std::vector<Jet3> map_jets(std::span<const double> u, int order) const;
  std::vector<double> to_cartesian(std::span<const double> u) const;

  /// OutOfDomain outside the box, SingularPoint inside the exclusion band.
  void check_regular(std::span<const double> u) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<Expression> maps_;
  std::vector<Interval> box_;
  Bindings constants_;
  std::optional<int> orientation_;
  double margin_ = 1e-6;
};

struct ChartPointData {
  int dim = 3;
  /// frame[j] = E_j = dr/du^j in Cartesian components.
  std::vector<std::vector<double>> frame;
  /// jacobian(q, j) = dx^q/du^j, row-major.
  std::vector<double> jacobian;
  /// inverse_jacobian(j, q) = du^j/dx^q, row-major.
  std::vector<double> inverse_jacobian;
  double det_jacobian = 0.0;
  Tensor g;
  Tensor g_inv;
  Christoffel gamma{};
};

ChartPointData frame(const Chart& chart, std::span<const double> u);

/// Covariant derivative of a field given in chart coordinates; type (r, s+1).
Tensor covariant_derivative(const TensorField& field, const Chart& chart,
                            std::span<const double> u);

/// Curve in chart coordinates: one expression of `t` per coordinate.
struct ChartPath {
  std::vector<Expression> u;
  double t0 = 0.0;
  double t1 = 1.0;
  std::string parameter = "t";
};

struct TransportSample {
  double t;
  std::vector<double> u;
  std::vector<double> a;
  /// Cartesian components of the transported vector.
  std::vector<double> cartesian;
};

/// Parallel transport of the vector a0 along the path with fixed-step RK4.
std::vector<TransportSample> transport_parallel(const Chart& chart, const ChartPath& path,
                                                std::span<const double> a0, int steps);

struct LineSample {
  double s;
  std::vector<double> u;
  std::vector<double> udot;
  std::vector<double> x;
};

/// Integrates the straight-line equation from u0. udot0 is rescaled to unit
/// Euclidean speed first.
std::vector<LineSample> straight_line_trace(const Chart& chart, std::span<const double> u0,
                                            std::span<const double> udot0, double length,
                                            int steps);

Tensor gradient(const Chart& chart, const Expression& f, std::span<const double> u);
double divergence(const Chart& chart, const TensorField& F, std::span<const double> u);
/// Needs a 3-dimensional chart with known orientation.
Tensor rotor(const Chart& chart, const TensorField& F, std::span<const double> u);
double laplacian(const Chart& chart, const Expression& f, std::span<const double> u);

/// Cube used to test the potential conditions before building a potential.
struct SampleBox {
  Interval x1{-1.0, 1.0};
  Interval x2{-1.0, 1.0};
  Interval x3{-1.0, 1.0};
  int points_per_axis = 5;
};

/// Scalar field phi with grad phi = F, assembled from line integrals along
/// the axis-parallel polyline from the origin.
class ScalarPotential {
 public:
  ScalarPotential(std::vector<Expression> F, std::vector<std::string> coords, Bindings constants,
                  int nodes);
  double value(std::span<const double> x) const;
  /// Gradient by differentiating under the integral sign.
  std::array<double, 3> gradient(std::span<const double> x) const;

 private:
  std::vector<Expression> F_;
  std::vector<std::string> coords_;
  Bindings constants_;
  int nodes_;
};

/// Vector field A with rot A = F, A^3 = 0.
class VectorPotential {
 public:
  VectorPotential(std::vector<Expression> F, std::vector<std::string> coords, Bindings constants,
                  int nodes);
  std::array<double, 3> value(std::span<const double> x) const;
  /// jacobian[i][k] = dA^i/dx^k, by differentiating under the integral sign.
  std::array<std::array<double, 3>, 3> jacobian(std::span<const double> x) const;

 private:
  std::vector<Expression> F_;
  std::vector<std::string> coords_;
  Bindings constants_;
  int nodes_;
};

/// Throws NotPotential when rot F exceeds `tol` somewhere on the sample grid.
ScalarPotential scalar_potential(std::vector<Expression> F,
                                 std::vector<std::string> coords = {"x1", "x2", "x3"},
                                 Bindings constants = {}, const SampleBox& box = {},
                                 double tol = 1e-8, int nodes = 64);
/// Throws NotVorticular when div F exceeds `tol` somewhere on the grid.
VectorPotential vector_potential(std::vector<Expression> F,
                                 std::vector<std::string> coords = {"x1", "x2", "x3"},
                                 Bindings constants = {}, const SampleBox& box = {},
                                 double tol = 1e-8, int nodes = 64);

}  // namespace geodetica
