#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vbsge/tensor.hpp"

namespace vbs {

// Basis conventions used throughout:
//   spin-1/2 index 0 = up, 1 = down
//   spin-1 index 0 = (m=+1), 1 = (m=0), 2 = (m=-1)
//   doubled bond index (alpha, beta) flattens to 2*alpha + beta

enum class Boundary { obc, pbc };

/// Symmetric-subspace isometry W^i_{a,a'}, stored with dims {3, 2, 2}.
struct Isometry {
  DenseTensor w;
};

/// Singlet factorization d_{a',a} = sum_alpha P^{a'}_alpha Q^a_alpha.
/// Both stored as {2, 2} with the spin-1/2 index first.
struct SingletFactors {
  DenseTensor p;
  DenseTensor q;
};

/// Bulk tensor M^i_{alpha,beta}, dims {3, 2, 2}.
struct SiteTensor {
  DenseTensor m;
  /// The 2x2 matrix M^i.
  DenseTensor slice(std::size_t i) const;
};

/// Transfer operator on the doubled bond space, 4x4, rows (alpha,beta),
/// columns (gamma,delta).
struct TransferOperator {
  DenseTensor a;
  unsigned block_length = 1;
};

struct BoundaryVectors {
  DenseTensor left;
  DenseTensor right;
};

/// Singlet coefficients d_{a',a} as a {2, 2} tensor.
DenseTensor singlet_coefficients();

Isometry build_isometry();
SingletFactors build_singlet_factors();

/// M^i_{alpha,beta} = sum_{a,a'} W^i_{a,a'} Q^a_alpha P^{a'}_beta.
SiteTensor build_site_tensor(const Isometry& w, const SingletFactors& pq);
SiteTensor build_site_tensor();

/// A(1) from the contraction of M with conj(M) over the physical index.
TransferOperator transfer_matrix(const SiteTensor& m);

/// Independent route: sum_i kron(M^i, conj(M^i)).
DenseTensor transfer_matrix_kron(const SiteTensor& m);

/// The expression printed for A(1) with its second negative term read as
/// |01>><<01|; the spectrum of the literal print is inconsistent.
DenseTensor transfer_matrix_reference();

SpectralDecomposition transfer_spectrum(const TransferOperator& a);

/// A(L) = A(1)^L.
TransferOperator block_transfer(const TransferOperator& a, unsigned length);

/// Block tensor of L contracted site tensors, dims {3^L, 2, 2}; the
/// physical index runs over (i_1, ..., i_L) in row-major order.
DenseTensor block_site_tensor(const SiteTensor& m, unsigned length);

/// A(L) built by contracting L site tensors with their conjugates, without
/// forming any power of A(1).
DenseTensor block_transfer_direct(const SiteTensor& m, unsigned length);

/// (|00>> + |11>>)/sqrt(2) on both ends.
BoundaryVectors boundary_vectors();

struct ChainNorm {
  double value = 0.0;      // <Psi|Psi>; 0 when it underflows
  double log_value = 0.0;  // log |<Psi|Psi>|, -inf for an exact zero
  bool underflow = false;
};

ChainNorm norm_obc(unsigned n_sites);
ChainNorm norm_pbc(unsigned n_sites);

/// Chain amplitudes from products of P, M and Q (OBC, dims 2,3,...,3,2) or
/// the trace of M products (PBC, dims 3,...,3), row-major over sites.
std::vector<cplx> mps_amplitudes(unsigned n_sites, Boundary bc);

}  // namespace vbs
