#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace vbs {

using cplx = std::complex<double>;

/// Dense complex tensor, row-major, with an explicit list of axis lengths.
/// A rank-2 tensor doubles as a matrix; rank 0 is a scalar.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, std::vector<cplx> entries);

  static DenseTensor matrix(std::size_t rows, std::size_t cols);
  static DenseTensor identity(std::size_t n);
  static DenseTensor vector(std::vector<cplx> entries);
  static DenseTensor scalar(cplx value);
  static DenseTensor diagonal(std::span<const cplx> diag);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  cplx& operator[](std::size_t flat) { return data_[flat]; }
  const cplx& operator[](std::size_t flat) const { return data_[flat]; }

  cplx& at(std::initializer_list<std::size_t> index);
  const cplx& at(std::initializer_list<std::size_t> index) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;

  // matrix view helpers; valid for rank 2
  bool is_matrix() const noexcept { return dims_.size() == 2; }
  bool is_square() const noexcept { return is_matrix() && dims_[0] == dims_[1]; }
  std::size_t rows() const { return dims_.at(0); }
  std::size_t cols() const { return dims_.at(1); }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }

  DenseTensor reshaped(std::vector<std::size_t> dims) const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(cplx s);

 private:
  std::vector<std::size_t> dims_;
  std::vector<cplx> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(cplx s, DenseTensor a);

using AxisPair = std::pair<std::size_t, std::size_t>;

/// Sums over each (axis of a, axis of b) pair. Free axes of `a` come first,
/// then free axes of `b`, each in their original order. An empty pair list
/// gives the outer product.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs);
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<AxisPair> pairs);

/// Axis permutation: result axis k is input axis order[k].
DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> order);
DenseTensor permute(const DenseTensor& t, std::initializer_list<std::size_t> order);

DenseTensor conj(const DenseTensor& t);
DenseTensor adjoint(const DenseTensor& m);
DenseTensor transpose(const DenseTensor& m);
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);
DenseTensor matvec(const DenseTensor& a, const DenseTensor& v);
/// Hermitian inner product <a|b> of two same-shape tensors.
cplx inner(const DenseTensor& a, const DenseTensor& b);
cplx trace(const DenseTensor& m);
double frobenius_norm(const DenseTensor& t);
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);
bool all_finite(const DenseTensor& t);

/// Kronecker product; entry ((i,k),(j,l)) = a(i,j) * b(k,l).
DenseTensor kron(const DenseTensor& a, const DenseTensor& b);

/// Eigenpairs sorted per the producing routine. `eigenvectors[k]` is a
/// unit-norm vector paired with `eigenvalues[k]`.
struct SpectralDecomposition {
  std::vector<cplx> eigenvalues;
  std::vector<std::vector<cplx>> eigenvectors;
  std::size_t dimension = 0;
};

/// a^n by repeated squaring; a^0 is the identity.
DenseTensor matrix_power(const DenseTensor& a, unsigned n);

/// a^n = V diag(lambda^n) V^{-1} from a precomputed decomposition of a.
DenseTensor matrix_power(const SpectralDecomposition& spectrum, unsigned n);

/// a^n = exp(log_scale) * result, renormalized at every product so that
/// large n does not underflow.
struct ScaledMatrix {
  DenseTensor matrix;
  double log_scale = 0.0;
};
ScaledMatrix scaled_matrix_power(const DenseTensor& a, unsigned n);

bool is_hermitian(const DenseTensor& a, double rel_tol = 1e-10);

/// Real eigenvalues ascending, orthonormal eigenvectors.
SpectralDecomposition eig_hermitian(const DenseTensor& a);

/// Eigenvalues only, ascending; cheaper for large oracle Hamiltonians.
std::vector<double> eigvals_hermitian(const DenseTensor& a);

/// Right eigenpairs of a general square matrix, sorted by descending real
/// part, then descending modulus, then lexicographically on the vector.
/// Throws NumericError when a pair's residual exceeds 1e-10 * ||a||.
SpectralDecomposition eig_general(const DenseTensor& a);

/// Dense reconstruction V diag(lambda) V^{-1}.
DenseTensor reconstruct(const SpectralDecomposition& spectrum);

}  // namespace vbs
