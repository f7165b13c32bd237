#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "geodetica/expr.hpp"
#include "geodetica/jet.hpp"
#include "geodetica/tensor.hpp"

namespace geodetica {

using Vec3 = std::array<double, 3>;

/// gamma[k][i][j] = Gamma^k_ij.
using Christoffel = std::array<std::array<std::array<double, 3>, 3>, 3>;
/// d_gamma[l][k][i][j] = d Gamma^k_ij / du^l.
using ChristoffelDerivative = std::array<Christoffel, 3>;

/// Metric data of an n-parameter map into Euclidean space, derived from the
/// map's coordinate jets. Entries beyond n are zero.
struct LocalGeometry {
  int n = 0;
  std::array<std::array<double, 3>, 3> g{};
  std::array<std::array<double, 3>, 3> g_inv{};
  double det_g = 0.0;
  /// dg[k][i][j] = d g_ij / du^k.
  std::array<std::array<std::array<double, 3>, 3>, 3> dg{};
  Christoffel gamma{};
  /// Filled only when the jets carry third derivatives.
  ChristoffelDerivative d_gamma{};
  bool has_d_gamma = false;
};

/// `x` holds one jet per Cartesian coordinate, in the n parameters.
/// Christoffels come from the metric: Gamma^k_ij = 1/2 g^kr (d_i g_rj +
/// d_j g_ir - d_r g_ij). Throws SingularPoint when det g vanishes.
LocalGeometry local_geometry(std::span<const Jet3> x, int n);

/// Covariant derivative of a field with value `a` and partials `da[k]`.
/// The new lower index is appended last.
Tensor covariant_derivative(const Tensor& a, std::span<const Tensor> da, const Christoffel& gamma);

/// Tensor field whose components are expressions in the coordinates.
struct TensorField {
  int dim = 3;
  int upper = 0;
  int lower = 0;
  Weight weight = Weight::tensor;
  /// dim^(upper+lower) components in row-major order, upper indices first.
  std::vector<Expression> components;

  static TensorField scalar(int dim, Expression f);
  static TensorField vector(std::vector<Expression> components);
};

struct FieldJet {
  Tensor value;
  std::vector<Tensor> partial;
};

/// Value and first partials of every component at `u`.
FieldJet eval_field(const TensorField& field, std::span<const std::string> coords,
                    std::span<const double> u, const Bindings& constants);

Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

}  // namespace geodetica
