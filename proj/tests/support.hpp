#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "geodetica/surface.hpp"

namespace testing_support {

using namespace geodetica;

inline constexpr double pi = std::numbers::pi;

/// Deterministic source of random test inputs.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double c : t.components()) m = std::max(m, std::abs(c));
  return m;
}

inline Surface sphere(double R = 1.0) {
  return Surface({"th", "ph"},
                 {parse("R*sin(th)*cos(ph)"), parse("R*sin(th)*sin(ph)"), parse("R*cos(th)")},
                 {Interval{0.0, pi}, Interval{-20.0, 20.0}}, 1, {{"R", R}});
}

/// Unit sphere through the plane x + y + z = 1: great circles are straight
/// lines in (p, q) and the first octant is the triangle (0,0), (1,0), (0,1).
inline Surface gnomonic_sphere() {
  const std::string den = "sqrt(p^2 + q^2 + (1 - p - q)^2)";
  return Surface({"p", "q"}, {parse("p/" + den), parse("q/" + den), parse("(1 - p - q)/" + den)},
                 {Interval{-2.0, 3.0}, Interval{-2.0, 3.0}});
}

/// Unit sphere by inverse stereographic projection from the south pole.
inline Surface stereographic_sphere() {
  return Surface({"u", "v"},
                 {parse("2*u/(1 + u^2 + v^2)"), parse("2*v/(1 + u^2 + v^2)"),
                  parse("(1 - u^2 - v^2)/(1 + u^2 + v^2)")},
                 {Interval{-10.0, 10.0}, Interval{-10.0, 10.0}});
}

inline Surface cylinder(double a = 1.0) {
  return Surface({"ph", "h"}, {parse("a*cos(ph)"), parse("a*sin(ph)"), parse("h")},
                 {Interval{-20.0, 20.0}, Interval{-100.0, 100.0}}, 1, {{"a", a}});
}

inline Surface torus(double Rb = 2.0, double rs = 0.5) {
  return Surface({"a", "b"},
                 {parse("(Rb + rs*cos(b))*cos(a)"), parse("(Rb + rs*cos(b))*sin(a)"),
                  parse("rs*sin(b)")},
                 {Interval{-20.0, 20.0}, Interval{-20.0, 20.0}}, 1, {{"Rb", Rb}, {"rs", rs}});
}

inline Surface plane() {
  return Surface({"x", "y"}, {parse("x"), parse("y"), parse("0")},
                 {Interval{-100.0, 100.0}, Interval{-100.0, 100.0}});
}

/// Graph z = f(x, y) of a cubic polynomial with the given coefficients.
inline Surface graph(const std::string& f) {
  return Surface({"x", "y"}, {parse("x"), parse("y"), parse(f)},
                 {Interval{-3.0, 3.0}, Interval{-3.0, 3.0}});
}

}  // namespace testing_support
