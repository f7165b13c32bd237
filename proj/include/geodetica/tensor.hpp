#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <vector>

namespace geodetica {

/// How a tensor-like value reacts to a change of basis.
enum class Weight {
  tensor,
  pseudotensor,
  /// Raw index symbol (the Levi-Civita array). Not transformable; wrap it
  /// with volume_tensor() first.
  symbol,
};

/// Weight of a product: tensor x tensor and pseudo x pseudo give tensors,
/// mixed pairs give pseudotensors, anything with a raw symbol stays raw.
Weight product_weight(Weight a, Weight b);

/// Dense (r,s)-tensor in dimension 2 or 3.
///
/// Components are stored row-major over the index tuple (i1..ir, j1..js),
/// upper indices first. Indices are zero-based throughout.
class Tensor {
 public:
  /// Scalar zero in dimension 3.
  Tensor() : Tensor(3, 0, 0) {}
  Tensor(int dim, int upper, int lower, Weight weight = Weight::tensor);
  Tensor(int dim, int upper, int lower, std::vector<double> components,
         Weight weight = Weight::tensor);

  static Tensor scalar(double value, int dim, Weight weight = Weight::tensor);
  static Tensor vector(std::span<const double> components, Weight weight = Weight::tensor);
  static Tensor covector(std::span<const double> components, Weight weight = Weight::tensor);
  /// (0,2) tensor from a dim x dim row-major matrix.
  static Tensor bilinear(int dim, std::span<const double> matrix, Weight weight = Weight::tensor);
  /// (2,0) tensor from a dim x dim row-major matrix.
  static Tensor bivector(int dim, std::span<const double> matrix, Weight weight = Weight::tensor);
  /// (1,1) tensor; matrix(i, j) = F^i_j.
  static Tensor operator_field(int dim, std::span<const double> matrix,
                               Weight weight = Weight::tensor);
  static Tensor identity_operator(int dim);

  int dim() const { return dim_; }
  int upper() const { return upper_; }
  int lower() const { return lower_; }
  int rank() const { return upper_ + lower_; }
  Weight weight() const { return weight_; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> components() const { return data_; }
  std::span<double> components() { return data_; }

  double operator()(std::span<const int> index) const { return data_[offset(index)]; }
  double& operator()(std::span<const int> index) { return data_[offset(index)]; }
  double operator()(std::initializer_list<int> index) const {
    return data_[offset({index.begin(), index.size()})];
  }
  double& operator()(std::initializer_list<int> index) {
    return data_[offset({index.begin(), index.size()})];
  }

  std::size_t offset(std::span<const int> index) const;
  /// Inverse of offset(): fills `index` (length rank()).
  void unravel(std::size_t flat, std::span<int> index) const;

  Tensor with_weight(Weight w) const;

  /// Largest absolute component difference; shapes must match.
  double max_abs_diff(const Tensor& other) const;
  double max_abs() const;

 private:
  int dim_;
  int upper_;
  int lower_;
  Weight weight_;
  std::vector<double> data_;
};

/// Direct and inverse transition matrices between two bases (row-major,
/// S(i,j) = S^i_j).
class BasisChange {
 public:
  /// Inverse computed from S; throws when S is singular.
  BasisChange(int dim, std::span<const double> direct);
  BasisChange(int dim, std::span<const double> direct, std::span<const double> inverse);

  int dim() const { return dim_; }
  double S(int i, int j) const { return s_[i * dim_ + j]; }
  double T(int i, int j) const { return t_[i * dim_ + j]; }
  double det_S() const;
  BasisChange inverse() const;

 private:
  int dim_;
  std::vector<double> s_;
  std::vector<double> t_;
};

Tensor add(const Tensor& a, const Tensor& b);
Tensor subtract(const Tensor& a, const Tensor& b);
Tensor scale(double factor, const Tensor& a);
Tensor tensor_product(const Tensor& a, const Tensor& b);
/// Contracts upper index `m` against lower index `n`.
Tensor contract(const Tensor& a, int m, int n);
/// B^{i_0..}_{j_0..} = A^{i_sigma(0)..}_{j_tau(0)..}.
Tensor transpose(const Tensor& a, std::span<const int> sigma, std::span<const int> tau);
/// Complete symmetrization over S_r x S_s.
Tensor symmetrize(const Tensor& a);
/// Complete alternation over S_r x S_s.
Tensor alternate(const Tensor& a);
/// Components in the other basis: one S per upper index, one T per lower
/// index, times sign(det S) for pseudotensors.
Tensor change_basis(const Tensor& a, const BasisChange& c);

/// Lowers upper index `m` with the (0,2) metric `g`, placing the new lower
/// index at lower position `n`.
Tensor lower_index(const Tensor& a, const Tensor& g, int m, int n);
/// Raises lower index `n` with the (2,0) inverse metric, placing the new
/// upper index at upper position `m`.
Tensor raise_index(const Tensor& a, const Tensor& g_inv, int n, int m);

/// Inverse of a (0,2) metric as a (2,0) tensor.
Tensor inverse_metric(const Tensor& g);
/// Throws ShapeError unless `g` is a symmetric (0,2) or (2,0) tensor
/// (tolerance relative to its largest entry).
void check_symmetric_metric(const Tensor& g, double tol = 1e-10);

/// Levi-Civita symbol with lower indices, as a raw (Weight::symbol) array.
Tensor levi_civita(int dim);

enum class Orientation { positive, negative, pseudo };

/// omega = xi * sqrt(det g) * epsilon. Weight is pseudotensor for
/// Orientation::pseudo (xi = 1), tensor otherwise.
Tensor volume_tensor(const Tensor& g, Orientation orientation);

/// Z^q = g^{qi} omega_{ijk} X^j Y^k.
Tensor cross_product(const Tensor& x, const Tensor& y, const Tensor& g, const Tensor& omega);
/// omega_{ijk} X^i Y^j Z^k.
double mixed_product(const Tensor& x, const Tensor& y, const Tensor& z, const Tensor& omega);

/// Determinant and inverse of small square matrices (row-major, n <= 3).
double determinant(int n, std::span<const double> m);
std::vector<double> invert(int n, std::span<const double> m);

}  // namespace geodetica
