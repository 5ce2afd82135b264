#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbsge/aklt_mps.hpp"
#include "vbsge/tensor.hpp"

// Full-state-vector reference implementation. Everything here is built
// from the singlet picture and explicit spin operators; the only MPS input
// is in overlap_mps, which exists to be compared against overlap_full.

namespace vbs {

inline constexpr std::size_t kMaxAmplitudes = 10'000'000;
inline constexpr std::size_t kMaxHamiltonianDim = 10'000;
inline constexpr std::uint64_t kDefaultSeed = 20080417;

/// Sites are indexed by their position in site_dims. OBC chains hold the
/// spin-1/2 ends at 0 and N+1 with bulk sites 1..N; PBC rings are 0..N-1.
struct DenseState {
  std::vector<std::size_t> site_dims;
  std::vector<cplx> amplitudes;
  bool normalized = false;

  double norm_squared() const;
  DenseState normalized_copy() const;
};

std::vector<std::size_t> chain_site_dims(unsigned n_sites, Boundary bc);

/// (x)W applied to the singlet chain (OBC) or singlet ring (PBC). Not
/// normalized.
DenseState build_vbs_state(unsigned n_sites, Boundary bc);

/// S.S + (1/3)(S.S)^2 on two spin-1 sites, 9x9.
DenseTensor aklt_bond_term();
/// (2/3)(1 + s.S) on a spin-1/2 and a spin-1 site; `half_first` selects the
/// site order (2,3) versus (3,2).
DenseTensor boundary_projector(bool half_first);

DenseTensor build_hamiltonian(unsigned n_sites, Boundary bc);

/// Dense embedding of a local operator acting on `sites` (in that order)
/// into the full product space.
DenseTensor embed_operator(const DenseTensor& op, std::span<const std::size_t> site_dims,
                           std::span<const std::size_t> sites);

/// op applied to the amplitudes on `sites`.
std::vector<cplx> apply_operator(const DenseTensor& op, const DenseState& state,
                                 std::span<const std::size_t> sites);

struct ClauseResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GroundStateReport {
  unsigned n_sites = 0;
  Boundary bc = Boundary::obc;
  double expected_energy = 0.0;
  double lowest_eigenvalue = 0.0;
  double residual = 0.0;
  std::size_t ground_degeneracy = 0;
  double gap = 0.0;
  std::vector<ClauseResult> clauses;

  bool passed() const;
};

/// Diagonalizes H and checks the VBS state against it; never throws on a
/// failed clause.
GroundStateReport ground_state_report(unsigned n_sites, Boundary bc);
/// As ground_state_report, but throws VerificationError naming the failed
/// clauses.
GroundStateReport verify_ground_state(unsigned n_sites, Boundary bc);

/// RDM of sites [first, first + length) for the normalized state.
DenseTensor reduced_density_matrix(const DenseState& state, std::size_t first, std::size_t length);

/// Block dimensions for blocks of L bulk sites; OBC boundary spins join the
/// first and last block.
std::vector<std::size_t> block_dims(const DenseState& state, unsigned block_length);

struct BlockProductAnsatz {
  std::vector<std::vector<cplx>> blocks;
};

/// Independent unit vectors with complex Gaussian entries.
BlockProductAnsatz random_block_ansatz(std::span<const std::size_t> dims, std::uint64_t seed);

/// <Phi|Psi> by contracting the full amplitude vector (not normalized).
cplx overlap_full(const DenseState& state, unsigned block_length, const BlockProductAnsatz& phi);
/// <Phi|Psi> from products of block MPS matrices.
cplx overlap_mps(unsigned n_sites, Boundary bc, unsigned block_length,
                 const BlockProductAnsatz& phi);

struct ExactGeometricEntanglement {
  double lambda_max_sq = 0.0;
  double per_block = 0.0;
  unsigned n_blocks = 0;
  std::vector<double> restart_objectives;
  std::size_t sweeps = 0;
  BlockProductAnsatz best;
};

/// Alternating maximization of |<Phi|Psi>|^2 over block product states;
/// throws NumericError if a half-step ever lowers the objective.
ExactGeometricEntanglement exact_geometric_entanglement(const DenseState& state,
                                                        unsigned block_length, unsigned restarts,
                                                        std::uint64_t seed = kDefaultSeed);

/// <S^[i] . S^[j]> on the normalized state; i and j must be spin-1 sites.
double exact_correlator(const DenseState& state, std::size_t i, std::size_t j);

}  // namespace vbs
