#include "vbsge/aklt_mps.hpp"

#include <cmath>
#include <limits>

#include "vbsge/errors.hpp"

namespace vbs {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kQuarterRoot = std::pow(2.0, -0.25);

// Contracts M{i,alpha,gamma} with conj(M){i,beta,delta} and orders the
// result as ((alpha,beta),(gamma,delta)).
DenseTensor doubled_contraction(const DenseTensor& m) {
  const std::size_t bond = m.dim(1);
  DenseTensor t = contract(m, conj(m), {{0, 0}});  // {alpha, gamma, beta, delta}
  return permute(t, {0, 2, 1, 3}).reshaped({bond * bond, bond * bond});
}

}  // namespace

DenseTensor SiteTensor::slice(std::size_t i) const {
  DenseTensor s = DenseTensor::matrix(m.dim(1), m.dim(2));
  for (std::size_t a = 0; a < m.dim(1); ++a)
    for (std::size_t b = 0; b < m.dim(2); ++b) s(a, b) = m.at({i, a, b});
  return s;
}

DenseTensor singlet_coefficients() {
  DenseTensor d = DenseTensor::matrix(2, 2);
  d(0, 1) = kInvSqrt2;
  d(1, 0) = -kInvSqrt2;
  return d;
}

Isometry build_isometry() {
  DenseTensor w({3, 2, 2});
  w.at({0, 0, 0}) = 1.0;        // |+1> <- |up up>
  w.at({1, 0, 1}) = kInvSqrt2;  // |0>  <- (|up dn> + |dn up>)/sqrt2
  w.at({1, 1, 0}) = kInvSqrt2;
  w.at({2, 1, 1}) = 1.0;  // |-1> <- |dn dn>
  return {w};
}

SingletFactors build_singlet_factors() {
  DenseTensor p = DenseTensor::matrix(2, 2);
  DenseTensor q = DenseTensor::matrix(2, 2);
  p(0, 0) = kQuarterRoot;
  p(1, 1) = kQuarterRoot;
  q(1, 0) = kQuarterRoot;
  q(0, 1) = -kQuarterRoot;
  return {p, q};
}

SiteTensor build_site_tensor(const Isometry& w, const SingletFactors& pq) {
  DenseTensor wq = contract(w.w, pq.q, {{1, 0}});  // {i, a', alpha}
  DenseTensor m = contract(wq, pq.p, {{1, 0}});    // {i, alpha, beta}
  return {m};
}

SiteTensor build_site_tensor() { return build_site_tensor(build_isometry(), build_singlet_factors()); }

TransferOperator transfer_matrix(const SiteTensor& m) { return {doubled_contraction(m.m), 1}; }

DenseTensor transfer_matrix_kron(const SiteTensor& m) {
  DenseTensor a = DenseTensor::matrix(4, 4);
  for (std::size_t i = 0; i < m.m.dim(0); ++i) {
    const DenseTensor s = m.slice(i);
    a += kron(s, conj(s));
  }
  return a;
}

DenseTensor transfer_matrix_reference() {
  // indices: 00 -> 0, 01 -> 1, 10 -> 2, 11 -> 3
  DenseTensor a = DenseTensor::matrix(4, 4);
  a(3, 0) = 0.5;
  a(0, 3) = 0.5;
  a(3, 3) = 0.25;
  a(0, 0) = 0.25;
  a(2, 2) = -0.25;
  a(1, 1) = -0.25;
  return a;
}

SpectralDecomposition transfer_spectrum(const TransferOperator& a) { return eig_general(a.a); }

TransferOperator block_transfer(const TransferOperator& a, unsigned length) {
  if (length < 1) throw ArgumentError("block_transfer: block length must be >= 1");
  return {matrix_power(a.a, length), a.block_length * length};
}

DenseTensor block_site_tensor(const SiteTensor& m, unsigned length) {
  if (length < 1) throw ArgumentError("block_site_tensor: block length must be >= 1");
  DenseTensor block = m.m;
  for (unsigned k = 1; k < length; ++k) {
    DenseTensor t = contract(block, m.m, {{2, 1}});  // {I, alpha, i, beta}
    const std::size_t phys = block.dim(0) * m.m.dim(0);
    block = permute(t, {0, 2, 1, 3}).reshaped({phys, m.m.dim(1), m.m.dim(2)});
  }
  return block;
}

DenseTensor block_transfer_direct(const SiteTensor& m, unsigned length) {
  return doubled_contraction(block_site_tensor(m, length));
}

BoundaryVectors boundary_vectors() {
  DenseTensor v = DenseTensor::vector({kInvSqrt2, 0.0, 0.0, kInvSqrt2});
  return {v, v};
}

namespace {

constexpr unsigned kLogSpaceThreshold = 200;

ChainNorm finish_norm(double direct, double log_value, unsigned n_sites) {
  ChainNorm out;
  out.log_value = log_value;
  out.value = n_sites <= kLogSpaceThreshold ? direct : std::exp(log_value);
  out.underflow = out.value != 0.0 && std::abs(out.value) < std::numeric_limits<double>::min();
  if (std::isfinite(log_value) && out.value == 0.0) out.underflow = true;
  if (out.underflow) out.value = 0.0;
  return out;
}

}  // namespace

ChainNorm norm_obc(unsigned n_sites) {
  if (n_sites < 1) throw ArgumentError("norm_obc: N must be >= 1");
  const auto a = transfer_matrix(build_site_tensor()).a;
  const auto [left, right] = boundary_vectors();
  double direct = 0.0;
  if (n_sites <= kLogSpaceThreshold) direct = inner(left, matvec(matrix_power(a, n_sites), right)).real();
  const ScaledMatrix scaled = scaled_matrix_power(a, n_sites);
  const double sandwich = inner(left, matvec(scaled.matrix, right)).real();
  return finish_norm(direct, std::log(std::abs(sandwich)) + scaled.log_scale, n_sites);
}

ChainNorm norm_pbc(unsigned n_sites) {
  if (n_sites < 1) throw ArgumentError("norm_pbc: N must be >= 1");
  const auto a = transfer_matrix(build_site_tensor()).a;
  double direct = 0.0;
  if (n_sites <= kLogSpaceThreshold) direct = trace(matrix_power(a, n_sites)).real();
  const ScaledMatrix scaled = scaled_matrix_power(a, n_sites);
  const double tr = trace(scaled.matrix).real();
  // exact cancellation (N = 1) leaves rounding noise only
  const double log_value = std::abs(tr) < 1e-14 ? -std::numeric_limits<double>::infinity()
                                                 : std::log(std::abs(tr)) + scaled.log_scale;
  return finish_norm(direct, log_value, n_sites);
}

std::vector<cplx> mps_amplitudes(unsigned n_sites, Boundary bc) {
  if (n_sites < 1) throw ArgumentError("mps_amplitudes: N must be >= 1");
  const SiteTensor m = build_site_tensor();
  const SingletFactors pq = build_singlet_factors();

  DenseTensor chain = bc == Boundary::obc ? pq.p : DenseTensor::identity(2);
  for (unsigned r = 0; r < n_sites; ++r) chain = contract(chain, m.m, {{chain.rank() - 1, 1}});
  if (bc == Boundary::obc) {
    chain = contract(chain, pq.q, {{chain.rank() - 1, 1}});
  } else {
    chain = contract(chain, DenseTensor::identity(2), {{0, 0}, {chain.rank() - 1, 1}});
  }
  return {chain.entries().begin(), chain.entries().end()};
}

}  // namespace vbs
