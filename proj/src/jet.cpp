#include "geodetica/jet.hpp"

#include <cmath>
#include <utility>

#include "geodetica/error.hpp"

namespace geodetica {

namespace {

int common_order(const Jet3& a, const Jet3& b) { return a.order < b.order ? a.order : b.order; }
int common_vars(const Jet3& a, const Jet3& b) { return a.nvars > b.nvars ? a.nvars : b.nvars; }

// Copies the entries with sorted indices onto every permutation so that
// rounding differences between index orders cannot break symmetry.
void mirror(Jet3& c) {
  const int n = c.nvars;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) c.hess[i][j] = c.hess[j][i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        int a = i, b = j, d = k;
        if (a > b) std::swap(a, b);
        if (b > d) std::swap(b, d);
        if (a > b) std::swap(a, b);
        c.third[i][j][k] = c.third[a][b][d];
      }
}

}  // namespace

Jet3 Jet3::constant(double v, int nvars, int order) {
  Jet3 j;
  j.nvars = nvars;
  j.order = order;
  j.value = v;
  return j;
}

Jet3 Jet3::variable(double v, int index, int nvars, int order) {
  Jet3 j = constant(v, nvars, order);
  if (order >= 1) j.grad[index] = 1.0;
  return j;
}

Jet3 Jet3::truncated(int new_order) const {
  Jet3 j = *this;
  j.order = new_order < order ? new_order : order;
  if (j.order < 3) j.third = {};
  if (j.order < 2) j.hess = {};
  if (j.order < 1) j.grad = {};
  return j;
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
  Jet3 c = Jet3::constant(a.value + b.value, common_vars(a, b), common_order(a, b));
  const int n = c.nvars;
  if (c.order >= 1)
    for (int i = 0; i < n; ++i) c.grad[i] = a.grad[i] + b.grad[i];
  if (c.order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.hess[i][j] = a.hess[i][j] + b.hess[i][j];
  if (c.order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) c.third[i][j][k] = a.third[i][j][k] + b.third[i][j][k];
  return c;
}

Jet3 operator-(const Jet3& a) {
  Jet3 c = a;
  c.value = -a.value;
  for (auto& g : c.grad) g = -g;
  for (auto& row : c.hess)
    for (auto& h : row) h = -h;
  for (auto& plane : c.third)
    for (auto& row : plane)
      for (auto& t : row) t = -t;
  return c;
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
  Jet3 c = Jet3::constant(a.value - b.value, common_vars(a, b), common_order(a, b));
  const int n = c.nvars;
  if (c.order >= 1)
    for (int i = 0; i < n; ++i) c.grad[i] = a.grad[i] - b.grad[i];
  if (c.order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.hess[i][j] = a.hess[i][j] - b.hess[i][j];
  if (c.order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) c.third[i][j][k] = a.third[i][j][k] - b.third[i][j][k];
  return c;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  Jet3 c = Jet3::constant(a.value * b.value, common_vars(a, b), common_order(a, b));
  const int n = c.nvars;
  const double av = a.value, bv = b.value;
  if (c.order >= 1)
    for (int i = 0; i < n; ++i) c.grad[i] = a.grad[i] * bv + av * b.grad[i];
  if (c.order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c.hess[i][j] = a.hess[i][j] * bv + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] +
                       av * b.hess[i][j];
  if (c.order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c.third[i][j][k] = a.third[i][j][k] * bv + a.hess[i][j] * b.grad[k] +
                             a.hess[i][k] * b.grad[j] + a.hess[j][k] * b.grad[i] +
                             a.grad[i] * b.hess[j][k] + a.grad[j] * b.hess[i][k] +
                             a.grad[k] * b.hess[i][j] + av * b.third[i][j][k];
  mirror(c);
  return c;
}

Jet3 operator*(double s, const Jet3& a) {
  Jet3 c = a;
  c.value *= s;
  for (auto& g : c.grad) g *= s;
  for (auto& row : c.hess)
    for (auto& h : row) h *= s;
  for (auto& plane : c.third)
    for (auto& row : plane)
      for (auto& t : row) t *= s;
  return c;
}

Jet3 compose(const Jet3& a, double f0, double f1, double f2, double f3) {
  Jet3 c = Jet3::constant(f0, a.nvars, a.order);
  const int n = a.nvars;
  if (c.order >= 1)
    for (int i = 0; i < n; ++i) c.grad[i] = f1 * a.grad[i];
  if (c.order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.hess[i][j] = f1 * a.hess[i][j] + f2 * a.grad[i] * a.grad[j];
  if (c.order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c.third[i][j][k] =
              f1 * a.third[i][j][k] +
              f2 * (a.hess[i][j] * a.grad[k] + a.hess[i][k] * a.grad[j] +
                    a.hess[j][k] * a.grad[i]) +
              f3 * a.grad[i] * a.grad[j] * a.grad[k];
  mirror(c);
  return c;
}

Jet3 reciprocal(const Jet3& a) {
  const double x = a.value;
  if (x == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / x;
  return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  if (b.value == 0.0) throw DomainError("division by zero");
  return a * reciprocal(b);
}

Jet3 integer_power(const Jet3& a, long n) {
  if (n == 0) return Jet3::constant(1.0, a.nvars, a.order);
  if (n < 0) return reciprocal(integer_power(a, -n));
  Jet3 result = a;
  for (long i = 1; i < n; ++i) result = result * a;
  return result;
}

Jet3 sin(const Jet3& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return compose(a, s, c, -s, -c);
}

Jet3 cos(const Jet3& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return compose(a, c, -s, -c, s);
}

Jet3 tan(const Jet3& a) {
  if (std::cos(a.value) == 0.0) throw DomainError("tan at a pole");
  const double t = std::tan(a.value);
  const double sec2 = 1.0 + t * t;
  return compose(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (sec2 + 2.0 * t * t));
}

Jet3 asin(const Jet3& a) {
  const double x = a.value;
  if (std::abs(x) > 1.0) throw DomainError("asin argument outside [-1, 1]");
  if (a.order >= 1 && std::abs(x) == 1.0) throw DomainError("asin not differentiable at +-1");
  const double q = 1.0 - x * x;
  const double r = a.order >= 1 ? 1.0 / std::sqrt(q) : 0.0;
  return compose(a, std::asin(x), r, x * r * r * r, (1.0 + 2.0 * x * x) * r * r * r * r * r);
}

Jet3 acos(const Jet3& a) {
  const double x = a.value;
  if (std::abs(x) > 1.0) throw DomainError("acos argument outside [-1, 1]");
  if (a.order >= 1 && std::abs(x) == 1.0) throw DomainError("acos not differentiable at +-1");
  const double q = 1.0 - x * x;
  const double r = a.order >= 1 ? 1.0 / std::sqrt(q) : 0.0;
  return compose(a, std::acos(x), -r, -x * r * r * r, -(1.0 + 2.0 * x * x) * r * r * r * r * r);
}

Jet3 atan(const Jet3& a) {
  const double x = a.value;
  const double q = 1.0 / (1.0 + x * x);
  return compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

Jet3 sinh(const Jet3& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return compose(a, s, c, s, c);
}

Jet3 cosh(const Jet3& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return compose(a, c, s, c, s);
}

Jet3 tanh(const Jet3& a) {
  const double t = std::tanh(a.value);
  const double d = 1.0 - t * t;
  return compose(a, t, d, -2.0 * t * d, d * (6.0 * t * t - 2.0));
}

Jet3 exp(const Jet3& a) {
  const double e = std::exp(a.value);
  return compose(a, e, e, e, e);
}

Jet3 log(const Jet3& a) {
  const double x = a.value;
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  const double r = 1.0 / x;
  return compose(a, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet3 sqrt(const Jet3& a) {
  const double x = a.value;
  if (x < 0.0) throw DomainError("sqrt of negative value");
  if (a.order >= 1 && x == 0.0) throw DomainError("sqrt not differentiable at 0");
  const double s = std::sqrt(x);
  if (a.order == 0) return compose(a, s, 0.0, 0.0, 0.0);
  const double r = 1.0 / x;
  return compose(a, s, 0.5 / s, -0.25 * r / s, 0.375 * r * r / s);
}

Jet3 abs(const Jet3& a) {
  const double x = a.value;
  if (a.order >= 1 && x == 0.0) throw DomainError("abs not differentiable at 0");
  const double sg = x < 0.0 ? -1.0 : 1.0;
  return compose(a, std::abs(x), sg, 0.0, 0.0);
}

}  // namespace geodetica
