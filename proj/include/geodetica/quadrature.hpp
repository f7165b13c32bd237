#pragma once

#include <array>
#include <functional>
#include <vector>

namespace geodetica {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule; cached per n, safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int n);

/// Fixed n-point rule on [a, b].
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n = 64);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive bisection with a 16-point Gauss-Legendre panel: a panel is accepted
/// when it agrees with the sum of its halves to within its share of `abs_tol`.
/// Throws QuadratureError when `max_depth` bisections are not enough.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol = 1e-10, int max_depth = 40);

/// Tensor-product rule over the rectangle [a1,b1] x [a2,b2].
double integrate_rectangle(const std::function<double(double, double)>& f, double a1, double b1,
                           double a2, double b2, int n = 64);

/// Integral over the triangle with the given vertices, through the collapsed
/// (Duffy) map of the unit square onto the triangle.
double integrate_triangle(const std::function<double(double, double)>& f,
                          const std::array<std::array<double, 2>, 3>& vertices, int n = 64);

}  // namespace geodetica
