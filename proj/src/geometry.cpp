#include "geodetica/geometry.hpp"

#include <cmath>

#include "geodetica/error.hpp"

namespace geodetica {

LocalGeometry local_geometry(std::span<const Jet3> x, int n) {
  LocalGeometry out;
  out.n = n;
  const std::size_t m = x.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < m; ++q) s += x[q].grad[i] * x[q].grad[j];
      out.g[i][j] = s;
    }
  std::vector<double> gm(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm[i * n + j] = out.g[i][j];
  out.det_g = determinant(n, gm);
  if (!(out.det_g > 1e-24)) throw SingularPoint("metric is degenerate at this point");
  const auto inv = invert(n, gm);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g_inv[i][j] = 0.5 * (inv[i * n + j] + inv[j * n + i]);

  const int order = x.empty() ? 0 : x[0].order;
  if (order < 2) return out;

  // d_k g_ij = sum_q (x_ik x_j + x_i x_jk)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < m; ++q)
          s += x[q].hess[i][k] * x[q].grad[j] + x[q].grad[i] * x[q].hess[j][k];
        out.dg[k][i][j] = s;
      }

  // Lowered symbols Gamma_rij = 1/2 (d_i g_rj + d_j g_ir - d_r g_ij).
  double low[3][3][3] = {};
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        low[r][i][j] = 0.5 * (out.dg[i][r][j] + out.dg[j][i][r] - out.dg[r][i][j]);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += out.g_inv[k][r] * low[r][i][j];
        out.gamma[k][i][j] = s;
      }

  if (order < 3) return out;

  // d_l d_k g_ij = sum_q (x_ikl x_j + x_ik x_jl + x_il x_jk + x_i x_jkl)
  double ddg[3][3][3][3] = {};
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t q = 0; q < m; ++q) {
            const auto& a = x[q];
            s += a.third[i][k][l] * a.grad[j] + a.hess[i][k] * a.hess[j][l] +
                 a.hess[i][l] * a.hess[j][k] + a.grad[i] * a.third[j][k][l];
          }
          ddg[l][k][i][j] = s;
        }
  // d_l g^kr = -g^ka (d_l g_ab) g^br
  double dginv[3][3][3] = {};
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s -= out.g_inv[k][a] * out.dg[l][a][b] * out.g_inv[b][r];
        dginv[l][k][r] = s;
      }
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) {
            const double dlow = 0.5 * (ddg[l][i][r][j] + ddg[l][j][i][r] - ddg[l][r][i][j]);
            s += dginv[l][k][r] * low[r][i][j] + out.g_inv[k][r] * dlow;
          }
          out.d_gamma[l][k][i][j] = s;
        }
  out.has_d_gamma = true;
  return out;
}

Tensor covariant_derivative(const Tensor& a, std::span<const Tensor> da, const Christoffel& gamma) {
  const int n = a.dim();
  if (static_cast<int>(da.size()) != n) throw ShapeError("covariant_derivative: need n partials");
  Tensor out(n, a.upper(), a.lower() + 1, a.weight());
  std::vector<int> io(out.rank()), ia(a.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, io);
    const int k = io[out.rank() - 1];
    for (int p = 0; p < a.rank(); ++p) ia[p] = io[p];
    double s = da[k](ia);
    for (int m = 0; m < a.upper(); ++m) {
      const int i = ia[m];
      for (int v = 0; v < n; ++v) {
        ia[m] = v;
        s += gamma[i][k][v] * a(ia);
      }
      ia[m] = i;
    }
    for (int p = 0; p < a.lower(); ++p) {
      const int slot = a.upper() + p;
      const int j = ia[slot];
      for (int w = 0; w < n; ++w) {
        ia[slot] = w;
        s -= gamma[w][k][j] * a(ia);
      }
      ia[slot] = j;
    }
    dst[f] = s;
  }
  return out;
}

TensorField TensorField::scalar(int dim, Expression f) {
  TensorField t;
  t.dim = dim;
  t.components = {std::move(f)};
  return t;
}

TensorField TensorField::vector(std::vector<Expression> components) {
  TensorField t;
  t.dim = static_cast<int>(components.size());
  t.upper = 1;
  t.components = std::move(components);
  return t;
}

FieldJet eval_field(const TensorField& field, std::span<const std::string> coords,
                    std::span<const double> u, const Bindings& constants) {
  const int n = field.dim;
  FieldJet out{Tensor(n, field.upper, field.lower, field.weight), {}};
  if (out.value.size() != field.components.size())
    throw ShapeError("field has " + std::to_string(field.components.size()) +
                     " components, expected " + std::to_string(out.value.size()));
  out.partial.assign(n, Tensor(n, field.upper, field.lower, field.weight));
  for (std::size_t c = 0; c < field.components.size(); ++c) {
    const Jet3 j = field.components[c].eval_jet(coords, u, 1, constants);
    out.value.components()[c] = j.value;
    for (int k = 0; k < n; ++k) out.partial[k].components()[c] = j.grad[k];
  }
  return out;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

}  // namespace geodetica
