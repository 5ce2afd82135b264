#include "vbsge/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>

#include "vbsge/errors.hpp"

namespace vbs {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void require_matrix(const DenseTensor& m, const char* op) {
  if (!m.is_matrix()) throw ArgumentError(std::string(op) + ": rank-2 tensor required");
}

void require_square(const DenseTensor& m, const char* op) {
  if (!m.is_square()) throw ArgumentError(std::string(op) + ": square matrix required");
}

Eigen::Map<const EigenMatrix> as_eigen(const DenseTensor& m) {
  return {m.entries().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

DenseTensor from_eigen(const EigenMatrix& e) {
  DenseTensor m = DenseTensor::matrix(e.rows(), e.cols());
  std::copy(e.data(), e.data() + e.size(), m.entries().begin());
  return m;
}

// Scales v so its largest-modulus entry (first on ties) is real positive.
void fix_phase(std::vector<cplx>& v) {
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v[k]);
    if (mag > best * (1.0 + 1e-9)) {
      best = mag;
      pivot = k;
    }
  }
  if (best <= 0.0) return;
  const cplx phase = std::conj(v[pivot]) / best;
  for (auto& x : v) x *= phase;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), data_(product(dims_)) {}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<cplx> entries)
    : dims_(std::move(dims)), data_(std::move(entries)) {
  if (data_.size() != product(dims_))
    throw ArgumentError("DenseTensor: entry count does not match dims");
}

DenseTensor DenseTensor::matrix(std::size_t rows, std::size_t cols) {
  return DenseTensor({rows, cols});
}

DenseTensor DenseTensor::identity(std::size_t n) {
  DenseTensor m = matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseTensor DenseTensor::vector(std::vector<cplx> entries) {
  const std::size_t n = entries.size();
  return DenseTensor({n}, std::move(entries));
}

DenseTensor DenseTensor::scalar(cplx value) { return DenseTensor({}, {value}); }

DenseTensor DenseTensor::diagonal(std::span<const cplx> diag) {
  DenseTensor m = matrix(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw ArgumentError("DenseTensor: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= dims_[k]) throw ArgumentError("DenseTensor: index out of range");
    flat = flat * dims_[k] + index[k];
  }
  return flat;
}

cplx& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return data_[flat_index(std::span(index.begin(), index.size()))];
}

const cplx& DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[flat_index(std::span(index.begin(), index.size()))];
}

DenseTensor DenseTensor::reshaped(std::vector<std::size_t> dims) const {
  return DenseTensor(std::move(dims), data_);
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.dims_ != dims_) throw ArgumentError("DenseTensor +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (other.dims_ != dims_) throw ArgumentError("DenseTensor -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(cplx s, DenseTensor a) { return a *= s; }

DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> order) {
  const auto& dims = t.dims();
  if (order.size() != dims.size()) throw ArgumentError("permute: order has wrong length");
  std::vector<bool> seen(dims.size(), false);
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= dims.size() || seen[order[k]])
      throw ArgumentError("permute: order is not a permutation");
    seen[order[k]] = true;
    new_dims[k] = dims[order[k]];
  }
  const auto old_strides = strides_of(dims);
  std::vector<std::size_t> gather(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) gather[k] = old_strides[order[k]];

  DenseTensor out(new_dims);
  std::vector<std::size_t> idx(new_dims.size(), 0);
  std::size_t src = 0;
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out[flat] = t[src];
    // odometer increment over the new axis order
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < new_dims[k]) {
        src += gather[k];
        break;
      }
      src -= gather[k] * (new_dims[k] - 1);
      idx[k] = 0;
    }
  }
  return out;
}

DenseTensor permute(const DenseTensor& t, std::initializer_list<std::size_t> order) {
  return permute(t, std::span(order.begin(), order.size()));
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const AxisPair> pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (const auto& [ia, ib] : pairs) {
    std::ostringstream where;
    where << "(" << ia << ", " << ib << ")";
    if (ia >= a.rank() || ib >= b.rank())
      throw ContractError("contract: axis pair " + where.str() + " out of range");
    if (used_a[ia] || used_b[ib])
      throw ContractError("contract: axis pair " + where.str() + " reuses an axis");
    if (a.dim(ia) != b.dim(ib))
      throw ContractError("contract: axis pair " + where.str() + " has mismatched lengths " +
                          std::to_string(a.dim(ia)) + " vs " + std::to_string(b.dim(ib)));
    used_a[ia] = used_b[ib] = true;
  }

  std::vector<std::size_t> order_a, order_b, free_dims;
  std::size_t free_a = 1, free_b = 1, summed = 1;
  for (std::size_t k = 0; k < a.rank(); ++k)
    if (!used_a[k]) {
      order_a.push_back(k);
      free_dims.push_back(a.dim(k));
      free_a *= a.dim(k);
    }
  for (const auto& [ia, ib] : pairs) {
    order_a.push_back(ia);
    order_b.push_back(ib);
    summed *= a.dim(ia);
  }
  for (std::size_t k = 0; k < b.rank(); ++k)
    if (!used_b[k]) {
      order_b.push_back(k);
      free_dims.push_back(b.dim(k));
      free_b *= b.dim(k);
    }

  const DenseTensor pa = permute(a, order_a);
  const DenseTensor pb = permute(b, order_b);
  DenseTensor out(free_dims);
  for (std::size_t i = 0; i < free_a; ++i) {
    const cplx* row = pa.entries().data() + i * summed;
    cplx* dst = out.entries().data() + i * free_b;
    for (std::size_t s = 0; s < summed; ++s) {
      const cplx x = row[s];
      if (x == cplx{}) continue;
      const cplx* col = pb.entries().data() + s * free_b;
      for (std::size_t j = 0; j < free_b; ++j) dst[j] += x * col[j];
    }
  }
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span(pairs.begin(), pairs.size()));
}

DenseTensor conj(const DenseTensor& t) {
  DenseTensor out = t;
  for (auto& x : out.entries()) x = std::conj(x);
  return out;
}

DenseTensor transpose(const DenseTensor& m) {
  require_matrix(m, "transpose");
  return permute(m, {1, 0});
}

DenseTensor adjoint(const DenseTensor& m) { return conj(transpose(m)); }

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  return contract(a, b, {{1, 0}});
}

DenseTensor matvec(const DenseTensor& a, const DenseTensor& v) {
  require_matrix(a, "matvec");
  return contract(a, v, {{1, 0}});
}

cplx inner(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) throw ArgumentError("inner: shape mismatch");
  cplx s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

cplx trace(const DenseTensor& m) {
  require_square(m, "trace");
  cplx s{};
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

double frobenius_norm(const DenseTensor& t) {
  double s = 0.0;
  for (const auto& x : t.entries()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.dims() != b.dims()) throw ArgumentError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

bool all_finite(const DenseTensor& t) {
  return std::all_of(t.entries().begin(), t.entries().end(), [](const cplx& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

DenseTensor kron(const DenseTensor& a, const DenseTensor& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const std::size_t na = a.rows(), nb = b.rows(), n = na * nb;
  DenseTensor out = DenseTensor::matrix(n, n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

DenseTensor matrix_power(const DenseTensor& a, unsigned n) {
  require_square(a, "matrix_power");
  DenseTensor result = DenseTensor::identity(a.rows());
  DenseTensor base = a;
  while (n > 0) {
    if (n & 1u) result = matmul(result, base);
    n >>= 1u;
    if (n > 0) base = matmul(base, base);
  }
  return result;
}

DenseTensor matrix_power(const SpectralDecomposition& spectrum, unsigned n) {
  const auto dim = static_cast<Eigen::Index>(spectrum.dimension);
  Eigen::MatrixXcd vecs(dim, dim);
  Eigen::VectorXcd powered(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index i = 0; i < dim; ++i) vecs(i, k) = spectrum.eigenvectors[k][i];
    powered(k) = std::pow(spectrum.eigenvalues[k], static_cast<int>(n));
    if (n == 0) powered(k) = 1.0;
  }
  const Eigen::MatrixXcd result = vecs * powered.asDiagonal() * vecs.inverse();
  return from_eigen(result);
}

ScaledMatrix scaled_matrix_power(const DenseTensor& a, unsigned n) {
  require_square(a, "scaled_matrix_power");
  auto renormalize = [](DenseTensor& m, double& log_scale) {
    double peak = 0.0;
    for (const auto& x : m.entries()) peak = std::max(peak, std::abs(x));
    if (peak > 0.0) {
      m *= 1.0 / peak;
      log_scale += std::log(peak);
    }
  };
  ScaledMatrix result{DenseTensor::identity(a.rows()), 0.0};
  ScaledMatrix base{a, 0.0};
  renormalize(base.matrix, base.log_scale);
  while (n > 0) {
    if (n & 1u) {
      result.matrix = matmul(result.matrix, base.matrix);
      result.log_scale += base.log_scale;
      renormalize(result.matrix, result.log_scale);
    }
    n >>= 1u;
    if (n > 0) {
      base.matrix = matmul(base.matrix, base.matrix);
      base.log_scale *= 2.0;
      renormalize(base.matrix, base.log_scale);
    }
  }
  return result;
}

bool is_hermitian(const DenseTensor& a, double rel_tol) {
  if (!a.is_square()) return false;
  const double scale = std::max(frobenius_norm(a), 1e-300);
  double dev = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      dev = std::max(dev, std::abs(a(i, j) - std::conj(a(j, i))));
  return dev <= rel_tol * scale;
}

SpectralDecomposition eig_hermitian(const DenseTensor& a) {
  require_square(a, "eig_hermitian");
  if (!is_hermitian(a)) throw ArgumentError("eig_hermitian: input is not Hermitian");
  const Eigen::MatrixXcd dense = as_eigen(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw NumericError("eig_hermitian: solver did not converge", 0.0);

  SpectralDecomposition out;
  out.dimension = a.rows();
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    out.eigenvalues.emplace_back(values(k), 0.0);
    std::vector<cplx> v(vectors.col(k).data(), vectors.col(k).data() + vectors.rows());
    fix_phase(v);
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

std::vector<double> eigvals_hermitian(const DenseTensor& a) {
  require_square(a, "eigvals_hermitian");
  if (!is_hermitian(a)) throw ArgumentError("eigvals_hermitian: input is not Hermitian");
  const auto entries = a.entries();
  const bool real = std::all_of(entries.begin(), entries.end(), [](cplx z) { return z.imag() == 0.0; });
  auto solve = [](const auto& dense) -> std::vector<double> {
    Eigen::SelfAdjointEigenSolver<std::decay_t<decltype(dense)>> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw NumericError("eigvals_hermitian: solver did not converge", 0.0);
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
  };
  // real symmetric input (e.g. spin Hamiltonians in the Sz basis) takes the
  // cheaper real solver
  if (real) return solve(Eigen::MatrixXd(as_eigen(a).real()));
  return solve(Eigen::MatrixXcd(as_eigen(a)));
}

SpectralDecomposition eig_general(const DenseTensor& a) {
  require_square(a, "eig_general");
  const Eigen::MatrixXcd dense = as_eigen(a);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw NumericError("eig_general: solver did not converge", 0.0);

  const double scale = std::max(frobenius_norm(a), 1e-300);
  struct Pair {
    cplx value;
    std::vector<cplx> vector;
  };
  std::vector<Pair> pairs;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    Eigen::VectorXcd v = solver.eigenvectors().col(k);
    v.normalize();
    const double residual = (dense * v - solver.eigenvalues()(k) * v).norm();
    if (residual > 1e-10 * scale)
      throw NumericError("eig_general: eigenpair residual " + std::to_string(residual) +
                             " exceeds tolerance",
                         residual);
    std::vector<cplx> vec(v.data(), v.data() + v.size());
    fix_phase(vec);
    pairs.push_back({solver.eigenvalues()(k), std::move(vec)});
  }

  constexpr double tie = 1e-12;
  auto lex_less = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i].real() - y[i].real()) > tie) return x[i].real() < y[i].real();
      if (std::abs(x[i].imag() - y[i].imag()) > tie) return x[i].imag() < y[i].imag();
    }
    return false;
  };
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    if (std::abs(x.value.real() - y.value.real()) > tie) return x.value.real() > y.value.real();
    if (std::abs(std::abs(x.value) - std::abs(y.value)) > tie)
      return std::abs(x.value) > std::abs(y.value);
    return lex_less(x.vector, y.vector);
  });

  SpectralDecomposition out;
  out.dimension = a.rows();
  for (auto& p : pairs) {
    out.eigenvalues.push_back(p.value);
    out.eigenvectors.push_back(std::move(p.vector));
  }
  return out;
}

DenseTensor reconstruct(const SpectralDecomposition& spectrum) {
  return matrix_power(spectrum, 1);
}

}  // namespace vbs
