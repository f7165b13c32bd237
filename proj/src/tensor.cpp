#include "geodetica/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "geodetica/error.hpp"

namespace geodetica {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw ShapeError("tensor dimension must be 2 or 3");
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.dim() != b.dim() || a.upper() != b.upper() || a.lower() != b.lower())
    throw ShapeError(std::string(what) + ": shape mismatch");
}

int permutation_sign(std::span<const int> p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

bool is_permutation_of_range(std::span<const int> p) {
  std::vector<int> sorted(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Tensor average_over_transpositions(const Tensor& a, bool signed_sum) {
  const auto sigmas = all_permutations(a.upper());
  const auto taus = all_permutations(a.lower());
  Tensor out(a.dim(), a.upper(), a.lower(), a.weight());
  for (const auto& sigma : sigmas) {
    const int ss = signed_sum ? permutation_sign(sigma) : 1;
    for (const auto& tau : taus) {
      const int st = signed_sum ? permutation_sign(tau) : 1;
      const Tensor t = transpose(a, sigma, tau);
      auto dst = out.components();
      auto src = t.components();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += ss * st * src[k];
    }
  }
  const double n = static_cast<double>(sigmas.size() * taus.size());
  for (double& v : out.components()) v /= n;
  return out;
}

}  // namespace

Weight product_weight(Weight a, Weight b) {
  if (a == Weight::symbol || b == Weight::symbol) return Weight::symbol;
  return a == b ? Weight::tensor : Weight::pseudotensor;
}

Tensor::Tensor(int dim, int upper, int lower, Weight weight)
    : dim_(dim), upper_(upper), lower_(lower), weight_(weight) {
  check_dim(dim);
  if (upper < 0 || lower < 0) throw ShapeError("negative tensor valency");
  data_.assign(ipow(dim, upper + lower), 0.0);
}

Tensor::Tensor(int dim, int upper, int lower, std::vector<double> components, Weight weight)
    : dim_(dim), upper_(upper), lower_(lower), weight_(weight), data_(std::move(components)) {
  check_dim(dim);
  if (upper < 0 || lower < 0) throw ShapeError("negative tensor valency");
  if (data_.size() != ipow(dim, upper + lower))
    throw ShapeError("component count " + std::to_string(data_.size()) + " does not match dim^" +
                     std::to_string(upper + lower));
}

Tensor Tensor::scalar(double value, int dim, Weight weight) {
  return Tensor(dim, 0, 0, {value}, weight);
}

Tensor Tensor::vector(std::span<const double> c, Weight weight) {
  return Tensor(static_cast<int>(c.size()), 1, 0, {c.begin(), c.end()}, weight);
}

Tensor Tensor::covector(std::span<const double> c, Weight weight) {
  return Tensor(static_cast<int>(c.size()), 0, 1, {c.begin(), c.end()}, weight);
}

Tensor Tensor::bilinear(int dim, std::span<const double> m, Weight weight) {
  return Tensor(dim, 0, 2, {m.begin(), m.end()}, weight);
}

Tensor Tensor::bivector(int dim, std::span<const double> m, Weight weight) {
  return Tensor(dim, 2, 0, {m.begin(), m.end()}, weight);
}

Tensor Tensor::operator_field(int dim, std::span<const double> m, Weight weight) {
  return Tensor(dim, 1, 1, {m.begin(), m.end()}, weight);
}

Tensor Tensor::identity_operator(int dim) {
  Tensor t(dim, 1, 1);
  for (int i = 0; i < dim; ++i) t({i, i}) = 1.0;
  return t;
}

std::size_t Tensor::offset(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != rank()) throw ShapeError("wrong number of indices");
  std::size_t off = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw ShapeError("index out of range");
    off = off * dim_ + static_cast<std::size_t>(i);
  }
  return off;
}

void Tensor::unravel(std::size_t flat, std::span<int> index) const {
  for (int k = rank() - 1; k >= 0; --k) {
    index[k] = static_cast<int>(flat % dim_);
    flat /= dim_;
  }
}

Tensor Tensor::with_weight(Weight w) const {
  Tensor t = *this;
  t.weight_ = w;
  return t;
}

double Tensor::max_abs_diff(const Tensor& other) const {
  require_same_shape(*this, other, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

// -- BasisChange ------------------------------------------------------------

BasisChange::BasisChange(int dim, std::span<const double> direct)
    : dim_(dim), s_(direct.begin(), direct.end()) {
  check_dim(dim);
  if (s_.size() != static_cast<std::size_t>(dim * dim))
    throw ShapeError("transition matrix has wrong size");
  t_ = invert(dim, s_);
}

BasisChange::BasisChange(int dim, std::span<const double> direct, std::span<const double> inverse)
    : dim_(dim), s_(direct.begin(), direct.end()), t_(inverse.begin(), inverse.end()) {
  check_dim(dim);
  const auto n = static_cast<std::size_t>(dim * dim);
  if (s_.size() != n || t_.size() != n) throw ShapeError("transition matrix has wrong size");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double sum = 0.0;
      for (int k = 0; k < dim; ++k) sum += S(i, k) * T(k, j);
      if (std::abs(sum - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw ShapeError("direct and inverse transition matrices are not inverse");
    }
}

double BasisChange::det_S() const { return determinant(dim_, s_); }

BasisChange BasisChange::inverse() const { return BasisChange(dim_, t_, s_); }

// -- algebra ----------------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  if (a.weight() != b.weight()) throw ShapeError("add: tensor and pseudotensor cannot be added");
  Tensor out = a;
  auto dst = out.components();
  auto src = b.components();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

Tensor subtract(const Tensor& a, const Tensor& b) { return add(a, scale(-1.0, b)); }

Tensor scale(double factor, const Tensor& a) {
  Tensor out = a;
  for (double& v : out.components()) v *= factor;
  return out;
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) throw ShapeError("tensor_product: dimension mismatch");
  const int dim = a.dim();
  Tensor out(dim, a.upper() + b.upper(), a.lower() + b.lower(),
             product_weight(a.weight(), b.weight()));
  std::vector<int> ia(a.rank()), ib(b.rank()), ic(out.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, ic);
    // Output layout: (upper A, upper B, lower A, lower B).
    for (int k = 0; k < a.upper(); ++k) ia[k] = ic[k];
    for (int k = 0; k < b.upper(); ++k) ib[k] = ic[a.upper() + k];
    const int lo = a.upper() + b.upper();
    for (int k = 0; k < a.lower(); ++k) ia[a.upper() + k] = ic[lo + k];
    for (int k = 0; k < b.lower(); ++k) ib[b.upper() + k] = ic[lo + a.lower() + k];
    dst[f] = a(ia) * b(ib);
  }
  return out;
}

Tensor contract(const Tensor& a, int m, int n) {
  if (a.upper() < 1 || a.lower() < 1) throw ShapeError("contract: need an upper and a lower index");
  if (m < 0 || m >= a.upper() || n < 0 || n >= a.lower())
    throw ShapeError("contract: index position out of range");
  Tensor out(a.dim(), a.upper() - 1, a.lower() - 1, a.weight());
  std::vector<int> io(out.rank()), ia(a.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, io);
    int src = 0;
    for (int k = 0; k < a.upper(); ++k) ia[k] = (k == m) ? 0 : io[src++];
    for (int k = 0; k < a.lower(); ++k) ia[a.upper() + k] = (k == n) ? 0 : io[src++];
    double sum = 0.0;
    for (int q = 0; q < a.dim(); ++q) {
      ia[m] = q;
      ia[a.upper() + n] = q;
      sum += a(ia);
    }
    dst[f] = sum;
  }
  return out;
}

Tensor transpose(const Tensor& a, std::span<const int> sigma, std::span<const int> tau) {
  if (static_cast<int>(sigma.size()) != a.upper() || static_cast<int>(tau.size()) != a.lower())
    throw ShapeError("transpose: permutation size does not match valency");
  if (!is_permutation_of_range(sigma) || !is_permutation_of_range(tau))
    throw ShapeError("transpose: not a permutation");
  Tensor out(a.dim(), a.upper(), a.lower(), a.weight());
  std::vector<int> io(a.rank()), ia(a.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, io);
    // B^{i_0 i_1 ..} = A^{i_sigma(0) i_sigma(1) ..}: A's k-th slot gets i_sigma(k).
    for (int k = 0; k < a.upper(); ++k) ia[k] = io[sigma[k]];
    for (int k = 0; k < a.lower(); ++k) ia[a.upper() + k] = io[a.upper() + tau[k]];
    dst[f] = a(ia);
  }
  return out;
}

Tensor symmetrize(const Tensor& a) { return average_over_transpositions(a, false); }

Tensor alternate(const Tensor& a) { return average_over_transpositions(a, true); }

Tensor change_basis(const Tensor& a, const BasisChange& c) {
  if (a.weight() == Weight::symbol)
    throw ShapeError("change_basis: a raw index symbol is not a tensor; use volume_tensor");
  if (a.dim() != c.dim()) throw ShapeError("change_basis: dimension mismatch");
  const int dim = a.dim();
  // F^{i..}_{j..} = S^i_p .. T^q_j .. F~^{p..}_{q..}, one slot at a time.
  Tensor cur = a;
  std::vector<int> io(a.rank());
  for (int slot = 0; slot < a.rank(); ++slot) {
    Tensor next(dim, a.upper(), a.lower(), a.weight());
    auto dst = next.components();
    const bool upper = slot < a.upper();
    for (std::size_t f = 0; f < dst.size(); ++f) {
      next.unravel(f, io);
      const int i = io[slot];
      double sum = 0.0;
      for (int q = 0; q < dim; ++q) {
        io[slot] = q;
        sum += (upper ? c.S(i, q) : c.T(q, i)) * cur(io);
      }
      dst[f] = sum;
    }
    cur = std::move(next);
  }
  if (a.weight() == Weight::pseudotensor && c.det_S() < 0.0) cur = scale(-1.0, cur);
  return cur;
}

void check_symmetric_metric(const Tensor& g, double tol) {
  if (!((g.upper() == 0 && g.lower() == 2) || (g.upper() == 2 && g.lower() == 0)))
    throw ShapeError("metric must be a (0,2) or (2,0) tensor");
  const double scale_ = std::max(1.0, g.max_abs());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i + 1; j < g.dim(); ++j)
      if (std::abs(g({i, j}) - g({j, i})) > tol * scale_)
        throw ShapeError("metric is not symmetric");
}

Tensor lower_index(const Tensor& a, const Tensor& g, int m, int n) {
  check_symmetric_metric(g);
  if (g.upper() != 0 || g.dim() != a.dim()) throw ShapeError("lower_index: need a (0,2) metric");
  if (m < 0 || m >= a.upper() || n < 0 || n > a.lower())
    throw ShapeError("lower_index: index position out of range");
  Tensor out(a.dim(), a.upper() - 1, a.lower() + 1, a.weight());
  std::vector<int> io(out.rank()), ia(a.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, io);
    int src = 0;
    for (int k = 0; k < a.upper(); ++k) ia[k] = (k == m) ? 0 : io[src++];
    const int jnew = io[out.upper() + n];
    for (int k = 0, l = 0; k < out.lower(); ++k) {
      if (k == n) continue;
      ia[a.upper() + l++] = io[out.upper() + k];
    }
    double sum = 0.0;
    for (int q = 0; q < a.dim(); ++q) {
      ia[m] = q;
      sum += a(ia) * g({q, jnew});
    }
    dst[f] = sum;
  }
  return out;
}

Tensor raise_index(const Tensor& a, const Tensor& g_inv, int n, int m) {
  check_symmetric_metric(g_inv);
  if (g_inv.lower() != 0 || g_inv.dim() != a.dim())
    throw ShapeError("raise_index: need a (2,0) inverse metric");
  if (n < 0 || n >= a.lower() || m < 0 || m > a.upper())
    throw ShapeError("raise_index: index position out of range");
  Tensor out(a.dim(), a.upper() + 1, a.lower() - 1, a.weight());
  std::vector<int> io(out.rank()), ia(a.rank());
  auto dst = out.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    out.unravel(f, io);
    const int inew = io[m];
    for (int k = 0, l = 0; k < out.upper(); ++k) {
      if (k == m) continue;
      ia[l++] = io[k];
    }
    int src = out.upper();
    for (int k = 0; k < a.lower(); ++k) ia[a.upper() + k] = (k == n) ? 0 : io[src++];
    double sum = 0.0;
    for (int q = 0; q < a.dim(); ++q) {
      ia[a.upper() + n] = q;
      sum += g_inv({inew, q}) * a(ia);
    }
    dst[f] = sum;
  }
  return out;
}

Tensor inverse_metric(const Tensor& g) {
  check_symmetric_metric(g);
  if (g.upper() != 0) throw ShapeError("inverse_metric: need a (0,2) metric");
  auto inv = invert(g.dim(), g.components());
  // Symmetrize away rounding so the result passes the symmetry check.
  const int d = g.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (inv[i * d + j] + inv[j * d + i]);
      inv[i * d + j] = inv[j * d + i] = v;
    }
  return Tensor(d, 2, 0, std::move(inv));
}

Tensor levi_civita(int dim) {
  check_dim(dim);
  Tensor eps(dim, 0, dim, Weight::symbol);
  std::vector<int> idx(dim);
  auto dst = eps.components();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    eps.unravel(f, idx);
    if (is_permutation_of_range(idx)) dst[f] = permutation_sign(idx);
  }
  return eps;
}

Tensor volume_tensor(const Tensor& g, Orientation orientation) {
  check_symmetric_metric(g);
  if (g.upper() != 0) throw ShapeError("volume_tensor: need a (0,2) metric");
  const double det = determinant(g.dim(), g.components());
  if (!(det > 0.0)) throw DomainError("volume_tensor: metric determinant is not positive");
  const double xi = orientation == Orientation::negative ? -1.0 : 1.0;
  Tensor omega = scale(xi * std::sqrt(det), levi_civita(g.dim()));
  return omega.with_weight(orientation == Orientation::pseudo ? Weight::pseudotensor
                                                                : Weight::tensor);
}

Tensor cross_product(const Tensor& x, const Tensor& y, const Tensor& g, const Tensor& omega) {
  if (x.dim() != 3 || y.dim() != 3 || g.dim() != 3 || omega.dim() != 3)
    throw ShapeError("cross_product: dimension must be 3");
  if (x.upper() != 1 || x.lower() != 0 || y.upper() != 1 || y.lower() != 0)
    throw ShapeError("cross_product: arguments must be vectors");
  if (omega.upper() != 0 || omega.lower() != 3) throw ShapeError("cross_product: bad omega");
  const Tensor g_inv = inverse_metric(g);
  Tensor z(3, 1, 0, product_weight(product_weight(x.weight(), y.weight()), omega.weight()));
  for (int q = 0; q < 3; ++q) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) sum += g_inv({q, i}) * omega({i, j, k}) * x({j}) * y({k});
    z({q}) = sum;
  }
  return z;
}

double mixed_product(const Tensor& x, const Tensor& y, const Tensor& z, const Tensor& omega) {
  if (x.dim() != 3 || y.dim() != 3 || z.dim() != 3 || omega.dim() != 3)
    throw ShapeError("mixed_product: dimension must be 3");
  if (omega.upper() != 0 || omega.lower() != 3) throw ShapeError("mixed_product: bad omega");
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) sum += omega({i, j, k}) * x({i}) * y({j}) * z({k});
  return sum;
}

double determinant(int n, std::span<const double> m) {
  switch (n) {
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      throw ShapeError("determinant: size must be 1..3");
  }
}

std::vector<double> invert(int n, std::span<const double> m) {
  const double det = determinant(n, m);
  if (det == 0.0 || !std::isfinite(det)) throw SingularPoint("matrix is singular");
  std::vector<double> r(static_cast<std::size_t>(n * n));
  if (n == 1) {
    r[0] = 1.0 / det;
  } else if (n == 2) {
    r = {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
  } else {
    r[0] = (m[4] * m[8] - m[5] * m[7]) / det;
    r[1] = (m[2] * m[7] - m[1] * m[8]) / det;
    r[2] = (m[1] * m[5] - m[2] * m[4]) / det;
    r[3] = (m[5] * m[6] - m[3] * m[8]) / det;
    r[4] = (m[0] * m[8] - m[2] * m[6]) / det;
    r[5] = (m[2] * m[3] - m[0] * m[5]) / det;
    r[6] = (m[3] * m[7] - m[4] * m[6]) / det;
    r[7] = (m[1] * m[6] - m[0] * m[7]) / det;
    r[8] = (m[0] * m[4] - m[1] * m[3]) / det;
  }
  return r;
}

}  // namespace geodetica
