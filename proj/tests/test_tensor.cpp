#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "vbsge/aklt_mps.hpp"
#include "vbsge/errors.hpp"
#include "vbsge/tensor.hpp"

using namespace vbs;
using vbs::testing::random_hermitian;
using vbs::testing::random_tensor;

TEST_CASE("contract: identity times basis vector") {
  const DenseTensor out = contract(DenseTensor::identity(2), DenseTensor::vector({1.0, 0.0}), {{1, 0}});
  REQUIRE(out.dims() == std::vector<std::size_t>{2});
  CHECK(out[0] == cplx(1.0));
  CHECK(out[1] == cplx(0.0));
}

TEST_CASE("contract: unit vector self-overlap is a scalar 1") {
  const double h = 1.0 / std::sqrt(2.0);
  const DenseTensor v = DenseTensor::vector({h, h});
  const DenseTensor s = contract(v, v, {{0, 0}});
  CHECK(s.rank() == 0);
  CHECK(std::abs(s[0] - 1.0) < 1e-15);
}

TEST_CASE("contract: free axes of a precede free axes of b") {
  std::mt19937_64 rng(1);
  const DenseTensor a = random_tensor({2, 3, 4}, rng);
  const DenseTensor b = random_tensor({5, 3}, rng);
  const DenseTensor c = contract(a, b, {{1, 1}});
  REQUIRE(c.dims() == std::vector<std::size_t>{2, 4, 5});
  cplx expected{};
  for (std::size_t k = 0; k < 3; ++k) expected += a.at({1, k, 2}) * b.at({3, k});
  CHECK(std::abs(c.at({1, 2, 3}) - expected) < 1e-13);
}

TEST_CASE("contract: errors name the offending pair") {
  const DenseTensor a({2, 3});
  const DenseTensor b({2, 2});
  try {
    contract(a, b, {{1, 0}});
    FAIL("expected ContractError");
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
  }
  CHECK_THROWS_AS(contract(a, b, {{5, 0}}), ContractError);
  CHECK_THROWS_AS(contract(a, b, {{0, 0}, {0, 1}}), ContractError);
}

TEST_CASE("contract: empty pair list is the outer product") {
  const DenseTensor a = DenseTensor::vector({1.0, 2.0});
  const DenseTensor b = DenseTensor::vector({3.0, 4.0, 5.0});
  const DenseTensor c = contract(a, b, {});
  CHECK(c.dims() == std::vector<std::size_t>{2, 3});
  CHECK(c.at({1, 2}) == cplx(10.0));
}

TEST_CASE("contract is bilinear and independent of pair order") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseTensor a = random_tensor({2, 3, 2}, rng);
    const DenseTensor b = random_tensor({3, 2, 4}, rng);
    const cplx alpha{0.3 * trial - 1.0, 0.7};
    const DenseTensor lhs = contract(alpha * a, b, {{1, 0}, {2, 1}});
    const DenseTensor rhs = alpha * contract(a, b, {{1, 0}, {2, 1}});
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    const DenseTensor swapped = contract(a, b, {{2, 1}, {1, 0}});
    CHECK(max_abs_diff(contract(a, b, {{1, 0}, {2, 1}}), swapped) < 1e-12);
  }
}

TEST_CASE("permute then inverse permute is the identity") {
  std::mt19937_64 rng(3);
  const DenseTensor t = random_tensor({2, 3, 4, 5}, rng);
  const DenseTensor p = permute(t, {2, 0, 3, 1});
  CHECK(p.dims() == std::vector<std::size_t>{4, 2, 5, 3});
  CHECK(p.at({3, 1, 4, 2}) == t.at({1, 2, 3, 4}));
  CHECK(max_abs_diff(permute(p, {1, 3, 0, 2}), t) == 0.0);
}

TEST_CASE("kron examples") {
  CHECK(max_abs_diff(kron(DenseTensor::identity(2), DenseTensor::identity(3)), DenseTensor::identity(6)) == 0.0);

  const std::vector<cplx> pm{1.0, -1.0};
  const DenseTensor k = kron(DenseTensor::diagonal(pm), DenseTensor::identity(2));
  const std::vector<cplx> expected{1.0, 1.0, -1.0, -1.0};
  CHECK(max_abs_diff(k, DenseTensor::diagonal(expected)) == 0.0);

  // entry ((i,k),(j,l)) = a(i,j) b(k,l)
  std::mt19937_64 rng(11);
  const DenseTensor a = random_tensor({2, 2}, rng);
  const DenseTensor b = random_tensor({3, 3}, rng);
  const DenseTensor ab = kron(a, b);
  CHECK(std::abs(ab(1 * 3 + 2, 0 * 3 + 1) - a(1, 0) * b(2, 1)) < 1e-15);
}

TEST_CASE("kron(Sz, Sz) on spin 1 has the pairwise products of {1,0,-1}") {
  const std::vector<cplx> sz{1.0, 0.0, -1.0};
  const DenseTensor zz = kron(DenseTensor::diagonal(sz), DenseTensor::diagonal(sz));
  std::vector<double> got = eigvals_hermitian(zz);
  // oracle: enumerate the products directly
  std::vector<double> want;
  for (double x : {1.0, 0.0, -1.0})
    for (double y : {1.0, 0.0, -1.0}) want.push_back(x * y);
  std::sort(want.begin(), want.end());
  for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-14);
}

TEST_CASE("matrix_power basics") {
  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  CHECK(max_abs_diff(matrix_power(a, 0), DenseTensor::identity(4)) == 0.0);
  CHECK(max_abs_diff(matrix_power(a, 1), a) == 0.0);

  const SpectralDecomposition sq = eig_general(matrix_power(a, 2));
  CHECK(std::abs(sq.eigenvalues[0] - 9.0 / 16.0) < 1e-12);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(sq.eigenvalues[k] - 1.0 / 16.0) < 1e-12);
}

TEST_CASE("matrix_power: repeated squaring agrees with the spectral route") {
  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  const SpectralDecomposition spec = eig_general(a);
  for (unsigned n = 0; n <= 20; ++n)
    CHECK(max_abs_diff(matrix_power(a, n), matrix_power(spec, n)) < 1e-12);

  // well-conditioned random Hermitian matrices, scaled to spectral radius < 1
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    DenseTensor h = random_hermitian(4, rng);
    h *= 0.2;
    const SpectralDecomposition hs = eig_general(h);
    for (unsigned n : {2u, 5u, 9u}) CHECK(max_abs_diff(matrix_power(h, n), matrix_power(hs, n)) < 1e-12);
  }
}

TEST_CASE("scaled_matrix_power reproduces the plain power and survives underflow") {
  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  for (unsigned n : {1u, 7u, 40u}) {
    const ScaledMatrix s = scaled_matrix_power(a, n);
    DenseTensor back = s.matrix;
    back *= std::exp(s.log_scale);
    CHECK(max_abs_diff(back, matrix_power(a, n)) < 1e-14);
  }
  const ScaledMatrix big = scaled_matrix_power(a, 5000);
  CHECK(all_finite(big.matrix));
  CHECK(std::abs(big.log_scale + std::log(2.0) - 5000 * std::log(0.75)) < 1e-9);
}

TEST_CASE("eig_hermitian examples") {
  const std::vector<cplx> d{3.0, 1.0, 2.0};
  const SpectralDecomposition s = eig_hermitian(DenseTensor::diagonal(d));
  CHECK(s.eigenvalues[0].real() == doctest::Approx(1.0));
  CHECK(s.eigenvalues[1].real() == doctest::Approx(2.0));
  CHECK(s.eigenvalues[2].real() == doctest::Approx(3.0));

  DenseTensor sx = DenseTensor::matrix(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const SpectralDecomposition x = eig_hermitian(sx);
  CHECK(std::abs(x.eigenvalues[0] + 1.0) < 1e-14);
  CHECK(std::abs(x.eigenvalues[1] - 1.0) < 1e-14);

  DenseTensor bad = DenseTensor::matrix(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(bad), ArgumentError);
}

TEST_CASE("eig_hermitian reconstruction and orthonormality") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {2u, 5u, 17u}) {
    const DenseTensor h = random_hermitian(n, rng);
    const SpectralDecomposition s = eig_hermitian(h);
    DenseTensor rebuilt = DenseTensor::matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(s.eigenvalues[k].imag()) == 0.0);
      if (k > 0) CHECK(s.eigenvalues[k].real() >= s.eigenvalues[k - 1].real());
      const auto& v = s.eigenvectors[k];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rebuilt(i, j) += s.eigenvalues[k] * v[i] * std::conj(v[j]);
      for (std::size_t l = 0; l < n; ++l) {
        cplx dot{};
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(s.eigenvectors[l][i]) * v[i];
        CHECK(std::abs(dot - (l == k ? 1.0 : 0.0)) < 1e-12);
      }
    }
    CHECK(max_abs_diff(rebuilt, h) <= 1e-10 * frobenius_norm(h));
  }
}

TEST_CASE("eig_general on the transfer matrix") {
  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  const SpectralDecomposition s = eig_general(a);
  REQUIRE(s.dimension == 4);
  CHECK(std::abs(s.eigenvalues[0] - 0.75) < 1e-12);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(s.eigenvalues[k] + 0.25) < 1e-12);

  const double h = 1.0 / std::sqrt(2.0);
  const auto& top = s.eigenvectors[0];
  const cplx overlap = h * top[0] + h * top[3];
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);

  for (std::size_t k = 0; k < 4; ++k) {
    const DenseTensor v = DenseTensor::vector(s.eigenvectors[k]);
    CHECK(std::abs(frobenius_norm(v) - 1.0) < 1e-12);
    DenseTensor r = matvec(a, v);
    r -= s.eigenvalues[k] * v;
    CHECK(frobenius_norm(r) <= 1e-10 * frobenius_norm(a));
  }
  CHECK(max_abs_diff(reconstruct(s), a) < 1e-12);
}

TEST_CASE("eig_general on the identity and determinism") {
  const SpectralDecomposition s = eig_general(DenseTensor::identity(4));
  for (const auto& e : s.eigenvalues) CHECK(std::abs(e - 1.0) < 1e-15);

  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  const SpectralDecomposition first = eig_general(a);
  const SpectralDecomposition second = eig_general(a);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 4; ++i) CHECK(first.eigenvectors[k][i] == second.eigenvectors[k][i]);
}

TEST_CASE("tensor entries stay finite and shapes are checked") {
  CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<cplx>(3)), ArgumentError);
  CHECK_THROWS_AS(matrix_power(DenseTensor({2, 3}), 2), ArgumentError);
  CHECK_THROWS_AS(kron(DenseTensor({2, 3}), DenseTensor::identity(2)), ArgumentError);
  const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  CHECK(all_finite(matrix_power(a, 300)));
}
