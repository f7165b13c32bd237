#include "geodetica/surface.hpp"

#include <algorithm>
#include <cmath>

#include "geodetica/error.hpp"

namespace geodetica {

namespace {

Vec3 column(const std::array<Jet3, 3>& x, int i) { return {x[0].grad[i], x[1].grad[i], x[2].grad[i]}; }

Vec3 second(const std::array<Jet3, 3>& x, int i, int j) {
  return {x[0].hess[i][j], x[1].hess[i][j], x[2].hess[i][j]};
}

Vec3 third(const std::array<Jet3, 3>& x, int i, int j, int k) {
  return {x[0].third[i][j][k], x[1].third[i][j][k], x[2].third[i][j][k]};
}

Tensor tensor2(const std::array<std::array<double, 3>, 3>& m, int upper, int lower) {
  Tensor t(2, upper, lower);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t({i, j}) = m[i][j];
  return t;
}

}  // namespace

Surface::Surface(std::array<std::string, 2> params, std::array<Expression, 3> maps,
                 std::array<Interval, 2> box, int orientation, Bindings constants)
    : params_(std::move(params)),
      maps_(std::move(maps)),
      box_(box),
      orientation_(orientation),
      constants_(std::move(constants)) {
  if (orientation_ != 1 && orientation_ != -1) throw InputError("orientation must be +1 or -1");
  for (const auto& iv : box_)
    if (!(iv.lo < iv.hi)) throw ShapeError("surface box interval is empty");
  for (const auto& p : params_)
    if (!is_valid_variable_name(p)) throw InputError("invalid parameter name '" + p + "'");
  if (params_[0] == params_[1]) throw InputError("surface parameters must be distinct");
  std::vector<std::string> unbound;
  const std::vector<std::string> vars(params_.begin(), params_.end());
  for (const auto& m : maps_)
    for (const auto& n : unbound_names(m, vars, constants_))
      if (std::find(unbound.begin(), unbound.end(), n) == unbound.end()) unbound.push_back(n);
  if (!unbound.empty()) throw UnboundVariable(unbound);
}

Surface Surface::with_orientation(int orientation) const {
  return Surface(params_, maps_, box_, orientation, constants_);
}

std::array<Jet3, 3> Surface::jets(std::span<const double> u, int order) const {
  if (u.size() != 2) throw ShapeError("surface point needs 2 parameters");
  for (int k = 0; k < 2; ++k)
    if (!box_[k].contains(u[k]))
      throw OutOfDomain("parameter " + params_[k] + " = " + std::to_string(u[k]) +
                        " is outside the surface box");
  std::array<Jet3, 3> out;
  for (int q = 0; q < 3; ++q) out[q] = maps_[q].eval_jet(params_, u, order, constants_);
  return out;
}

Vec3 Surface::point(std::span<const double> u) const {
  const auto x = jets(u, 0);
  return {x[0].value, x[1].value, x[2].value};
}

SurfacePointData surface_point(const Surface& s, std::span<const double> u, bool with_derivatives) {
  const auto x = s.jets(u, with_derivatives ? 3 : 2);
  SurfacePointData d;
  d.E = {column(x, 0), column(x, 1)};
  const Vec3 N = cross(d.E[0], d.E[1]);
  const double Nn = norm(N);
  if (!(Nn >= 1e-12)) throw SingularPoint("surface tangent vectors are linearly dependent");
  const Vec3 nhat = (1.0 / Nn) * N;
  d.n = static_cast<double>(s.orientation()) * nhat;

  const auto geo = local_geometry(x, 2);
  d.g = tensor2(geo.g, 0, 2);
  d.g_inv = tensor2(geo.g_inv, 2, 0);
  d.det_g = geo.det_g;
  d.gamma = geo.gamma;
  d.b = Tensor(2, 0, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.b({i, j}) = dot(second(x, i, j), d.n);
  d.omega = volume_tensor(d.g, s.orientation() > 0 ? Orientation::positive : Orientation::negative);

  if (with_derivatives) {
    d.has_derivatives = true;
    d.d_gamma = geo.d_gamma;
    for (int k = 0; k < 2; ++k) {
      // d_k n = xi (d_k N - nhat (nhat . d_k N)) / |N|
      const Vec3 dN = cross(second(x, 0, k), d.E[1]) + cross(d.E[0], second(x, 1, k));
      const Vec3 dn = (s.orientation() / Nn) * (dN - dot(nhat, dN) * nhat);
      d.db[k] = Tensor(2, 0, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          d.db[k]({i, j}) = dot(third(x, i, j, k), d.n) + dot(second(x, i, j), dn);
    }
  }
  return d;
}

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::elliptic:
      return "elliptic";
    case PointClass::hyperbolic:
      return "hyperbolic";
    case PointClass::parabolic:
      return "parabolic";
  }
  return "parabolic";
}

namespace {

Tensor riemann_from(const SurfacePointData& d) {
  Tensor R(2, 1, 3);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = d.d_gamma[i][k][j][r] - d.d_gamma[j][k][i][r];
          for (int q = 0; q < 2; ++q)
            v += d.gamma[k][i][q] * d.gamma[q][j][r] - d.gamma[k][j][q] * d.gamma[q][i][r];
          R({k, r, i, j}) = v;
        }
  return R;
}

// g-unit vector and its Cartesian image.
std::array<double, 2> g_normalize(const Tensor& g, std::array<double, 2> a) {
  double n2 = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) n2 += g({i, j}) * a[i] * a[j];
  const double inv = 1.0 / std::sqrt(n2);
  return {a[0] * inv, a[1] * inv};
}

}  // namespace

CurvatureReport curvature(const Surface& s, std::span<const double> u) {
  const SurfacePointData d = surface_point(s, u, true);
  CurvatureReport rep;

  // b^k_i = sum_j b_ij g^jk
  Tensor W(2, 1, 1);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) {
      double v = 0.0;
      for (int j = 0; j < 2; ++j) v += d.b({i, j}) * d.g_inv({j, k});
      W({k, i}) = v;
    }
  rep.shape_operator = W;
  const double tr = W({0, 0}) + W({1, 1});
  const double det = W({0, 0}) * W({1, 1}) - W({0, 1}) * W({1, 0});
  rep.H = 0.5 * tr;
  rep.K = det;

  const double E = d.g({0, 0}), F = d.g({0, 1}), G = d.g({1, 1});
  const double L = d.b({0, 0}), M = d.b({0, 1}), N = d.b({1, 1});
  rep.H_forms = 0.5 * (E * N + G * L - 2.0 * F * M) / (E * G - F * F);
  rep.K_forms = (L * N - M * M) / (E * G - F * F);

  // Symmetric form S = L^-1 b L^-T in a g-orthonormal basis, g = L L^T.
  const double l00 = std::sqrt(E), l10 = F / l00, l11 = std::sqrt(G - l10 * l10);
  const double m00 = 1.0 / l00, m10 = -l10 / (l00 * l11), m11 = 1.0 / l11;
  const double S00 = m00 * m00 * L;
  const double S01 = m00 * (m10 * L + m11 * M);
  const double S11 = m10 * m10 * L + 2.0 * m10 * m11 * M + m11 * m11 * N;
  const double half = 0.5 * (S00 - S11);
  const double root = std::hypot(half, S01);
  rep.k1 = 0.5 * (S00 + S11) + root;
  rep.k2 = 0.5 * (S00 + S11) - root;
  rep.umbilical = std::abs(rep.k1 - rep.k2) < 1e-9;

  std::array<double, 2> a1{}, a2{};
  if (rep.umbilical) {
    a1 = g_normalize(d.g, {1.0, 0.0});
    // Gram-Schmidt of the second coordinate direction against the first.
    const double proj = d.g({0, 1}) * a1[0] + d.g({1, 1}) * a1[1];
    a2 = g_normalize(d.g, {-proj * a1[0], 1.0 - proj * a1[1]});
  } else {
    const double angle = 0.5 * std::atan2(2.0 * S01, S00 - S11);
    const double c = std::cos(angle), sn = std::sin(angle);
    // Back to surface components with L^-T.
    a1 = {m00 * c + m10 * sn, m11 * sn};
    a2 = {-m00 * sn + m10 * c, m11 * c};
  }
  // Right-handed pair with respect to the area tensor.
  if (d.omega({0, 1}) * (a1[0] * a2[1] - a1[1] * a2[0]) < 0.0) a2 = {-a2[0], -a2[1]};
  rep.dirs_inner = {a1, a2};
  rep.dirs = {a1[0] * d.E[0] + a1[1] * d.E[1], a2[0] * d.E[0] + a2[1] * d.E[1]};

  const double scale = std::max(1.0, rep.k1 * rep.k1 + rep.k2 * rep.k2);
  if (std::abs(rep.K) <= 1e-12 * scale)
    rep.point_class = PointClass::parabolic;
  else
    rep.point_class = rep.K > 0 ? PointClass::elliptic : PointClass::hyperbolic;

  const Tensor R = riemann_from(d);
  rep.R_scalar = scalar_curvature(ricci_tensor(R), d.g_inv);
  rep.gauss_residual = std::abs(rep.R_scalar - 2.0 * rep.K);

  const Tensor nb = covariant_derivative(d.b, d.db, d.gamma);  // nb({j,k,i}) = nabla_i b_jk
  double cod = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) cod = std::max(cod, std::abs(nb({j, k, i}) - nb({i, k, j})));
  rep.codazzi_residual = cod;
  return rep;
}

Tensor riemann_tensor(const Surface& s, std::span<const double> u) {
  return riemann_from(surface_point(s, u, true));
}

Tensor ricci_tensor(const Tensor& R) { return contract(R, 0, 1); }

double scalar_curvature(const Tensor& ricci, const Tensor& g_inv) {
  double v = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < 2; ++j) v += ricci({r, j}) * g_inv({r, j});
  return v;
}

Tensor curvature_from_scalar(const Surface& s, std::span<const double> u) {
  const SurfacePointData d = surface_point(s, u, true);
  const double Rs = scalar_curvature(ricci_tensor(riemann_from(d)), d.g_inv);
  Tensor out(2, 1, 3);
  for (int k = 0; k < 2; ++k)
    for (int r = 0; r < 2; ++r)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          out({k, r, i, j}) = 0.5 * Rs * ((k == i ? d.g({r, j}) : 0.0) - (k == j ? d.g({r, i}) : 0.0));
  return out;
}

Tensor surface_covariant_derivative(const TensorField& field, const Surface& s,
                                    std::span<const double> u) {
  if (field.dim != 2) throw ShapeError("inner fields on a surface have dimension 2");
  const SurfacePointData d = surface_point(s, u);
  const FieldJet fj = eval_field(field, s.params(), u, s.constants());
  return covariant_derivative(fj.value, fj.partial, d.gamma);
}

}  // namespace geodetica
