#pragma once

#include <array>

namespace geodetica {

/// Truncated Taylor expansion of a scalar function of up to three active
/// variables, carried through order three.
///
/// Derivative parts are stored densely: `hess` and `third` are kept fully
/// symmetric so callers can index any permutation. Parts above `order` are
/// left at zero and never read by the arithmetic below, so evaluating at a
/// higher order does not perturb lower-order parts.
struct Jet3 {
  static constexpr int kMaxVars = 3;
  static constexpr int kMaxOrder = 3;

  int nvars = 0;
  int order = 0;
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
  std::array<std::array<std::array<double, 3>, 3>, 3> third{};

  static Jet3 constant(double v, int nvars, int order);
  /// Seed for the `index`-th active variable at value v.
  static Jet3 variable(double v, int index, int nvars, int order);

  /// Same jet cut down to a lower order.
  Jet3 truncated(int new_order) const;
};

Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator*(double s, const Jet3& a);
Jet3 operator/(const Jet3& a, const Jet3& b);

/// Composition f(a) given f and its first three derivatives at a.value.
Jet3 compose(const Jet3& a, double f0, double f1, double f2, double f3);

Jet3 reciprocal(const Jet3& a);
Jet3 integer_power(const Jet3& a, long n);

Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 tan(const Jet3& a);
Jet3 asin(const Jet3& a);
Jet3 acos(const Jet3& a);
Jet3 atan(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 tanh(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 abs(const Jet3& a);

}  // namespace geodetica
