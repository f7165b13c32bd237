#include "geodetica/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "geodetica/error.hpp"

namespace geodetica {

namespace {

// Newton iteration on the Legendre recurrence, seeded with the Chebyshev-like
// asymptotic guess for each root.
GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = gauss_legendre(16);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

IntegrationResult adapt(const std::function<double(double)>& f, double a, double b, double whole,
                        double tol, int depth_left) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol || err <= 1e-15 * std::abs(left + right)) return {left + right, err};
  if (depth_left == 0) throw QuadratureError("adaptive quadrature did not converge", err);
  const auto l = adapt(f, a, mid, left, 0.5 * tol, depth_left - 1);
  const auto r = adapt(f, mid, b, right, 0.5 * tol, depth_left - 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw ShapeError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, int max_depth) {
  if (a == b) return {};
  return adapt(f, a, b, panel(f, a, b), abs_tol, max_depth);
}

double integrate_rectangle(const std::function<double(double, double)>& f, double a1, double b1,
                           double a2, double b2, int n) {
  const auto& rule = gauss_legendre(n);
  const double h1 = 0.5 * (b1 - a1), m1 = 0.5 * (a1 + b1);
  const double h2 = 0.5 * (b2 - a2), m2 = 0.5 * (a2 + b2);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sum += rule.weights[i] * rule.weights[j] *
             f(m1 + h1 * rule.nodes[i], m2 + h2 * rule.nodes[j]);
  return sum * h1 * h2;
}

double integrate_triangle(const std::function<double(double, double)>& f,
                          const std::array<std::array<double, 2>, 3>& v, int n) {
  // (s, t) in [0,1]^2 -> p = v0 + s (v1 - v0) + s t (v2 - v1); Jacobian s * 2|T|.
  const double e1x = v[1][0] - v[0][0], e1y = v[1][1] - v[0][1];
  const double e2x = v[2][0] - v[1][0], e2y = v[2][1] - v[1][1];
  const double jac = std::abs(e1x * e2y - e1y * e2x);
  const auto& rule = gauss_legendre(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (rule.nodes[j] + 1.0);
      const double x = v[0][0] + s * e1x + s * t * e2x;
      const double y = v[0][1] + s * e1y + s * t * e2y;
      sum += rule.weights[i] * rule.weights[j] * s * f(x, y);
    }
  }
  return sum * 0.25 * jac;
}

}  // namespace geodetica
