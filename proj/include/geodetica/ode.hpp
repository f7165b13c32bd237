#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "geodetica/error.hpp"

namespace geodetica {

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const F& f, double t, const std::array<double, N>& y, double h) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const auto k1 = f(t, y);
  const auto k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(t + h, axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(out[i])) throw NonFiniteValue("integration produced a non-finite value");
  }
  return out;
}

/// Fixed-step RK4 from t0 to t1 in `steps` steps; `observe(t, y)` sees the
/// initial state and every step.
template <std::size_t N, typename F, typename Observer>
std::array<double, N> rk4_integrate(const F& f, double t0, double t1, std::array<double, N> y,
                                    int steps, Observer&& observe) {
  const double h = (t1 - t0) / steps;
  observe(t0, y);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const double next = i + 1 == steps ? t1 : t0 + (i + 1) * h;
    y = rk4_step(f, t, y, next - t);
    observe(next, y);
  }
  return y;
}

}  // namespace geodetica
