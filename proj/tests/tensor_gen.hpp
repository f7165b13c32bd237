#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "geodetica/tensor.hpp"
#include "support.hpp"

namespace testing_support {

inline Tensor random_tensor(Gen& gen, int dim, int upper, int lower,
                            Weight weight = Weight::tensor) {
  Tensor t(dim, upper, lower, weight);
  for (auto& c : t.components()) c = gen.uniform(-2.0, 2.0);
  return t;
}

/// Random tensor of rank <= max_rank with a random weight.
inline Tensor random_any(Gen& gen, int dim, int max_rank) {
  const int upper = gen.integer(0, max_rank);
  const int lower = gen.integer(0, max_rank - upper);
  const Weight w = gen.integer(0, 1) ? Weight::pseudotensor : Weight::tensor;
  return random_tensor(gen, dim, upper, lower, w);
}

/// Well-conditioned random transition matrix (row-major).
inline std::vector<double> random_transition(Gen& gen, int dim) {
  for (;;) {
    std::vector<double> s(dim * dim);
    for (auto& v : s) v = gen.uniform(-1.5, 1.5);
    if (std::abs(determinant(dim, s)) > 0.3) return s;
  }
}

/// Random symmetric positive-definite metric A^T A + I.
inline Tensor random_metric(Gen& gen, int dim) {
  std::vector<double> a(dim * dim), g(dim * dim, 0.0);
  for (auto& v : a) v = gen.uniform(-1.0, 1.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (int k = 0; k < dim; ++k) s += a[k * dim + i] * a[k * dim + j];
      g[i * dim + j] = s;
    }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) g[i * dim + j] = g[j * dim + i];
  return Tensor::bilinear(dim, g);
}

inline std::vector<int> random_permutation(Gen& gen, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), gen.engine());
  return p;
}

}  // namespace testing_support
