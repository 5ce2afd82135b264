#include "vbsge/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "vbsge/errors.hpp"
#include "vbsge/spin.hpp"

namespace vbs {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void check_amplitude_capacity(std::span<const std::size_t> dims) {
  // overflow-safe running product
  std::size_t total = 1;
  for (auto d : dims) {
    if (total > kMaxAmplitudes / d) throw CapacityError("state vector exceeds 1e7 amplitudes", total * d);
    total *= d;
  }
}

// Calls visit(row, col, value) for every nonzero of op embedded on `sites`.
template <typename Visit>
void for_each_embedded(const DenseTensor& op, std::span<const std::size_t> site_dims,
                       std::span<const std::size_t> sites, Visit&& visit) {
  const auto strides = strides_of(site_dims);
  std::vector<std::size_t> local_dims;
  for (auto s : sites) {
    if (s >= site_dims.size()) throw ArgumentError("operator site out of range");
    local_dims.push_back(site_dims[s]);
  }
  const std::size_t local = product(local_dims);
  if (!op.is_square() || op.rows() != local)
    throw ArgumentError("operator dimension does not match its sites");

  // offset[l] = contribution of local basis state l to the global index
  std::vector<std::size_t> offset(local, 0);
  for (std::size_t l = 0; l < local; ++l) {
    std::size_t rest = l;
    for (std::size_t k = sites.size(); k-- > 0;) {
      offset[l] += (rest % local_dims[k]) * strides[sites[k]];
      rest /= local_dims[k];
    }
  }

  const std::size_t total = product(site_dims);
  for (std::size_t col = 0; col < total; ++col) {
    std::size_t lc = 0;
    for (std::size_t k = 0; k < sites.size(); ++k)
      lc = lc * local_dims[k] + (col / strides[sites[k]]) % local_dims[k];
    const std::size_t base = col - offset[lc];
    for (std::size_t lr = 0; lr < local; ++lr) {
      const cplx v = op(lr, lc);
      if (v != cplx{}) visit(base + offset[lr], col, v);
    }
  }
}

}  // namespace

double DenseState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

DenseState DenseState::normalized_copy() const {
  DenseState out = *this;
  const double n = std::sqrt(norm_squared());
  for (auto& a : out.amplitudes) a /= n;
  out.normalized = true;
  return out;
}

std::vector<std::size_t> chain_site_dims(unsigned n_sites, Boundary bc) {
  std::vector<std::size_t> dims;
  if (bc == Boundary::obc) dims.push_back(2);
  dims.insert(dims.end(), n_sites, 3);
  if (bc == Boundary::obc) dims.push_back(2);
  return dims;
}

DenseState build_vbs_state(unsigned n_sites, Boundary bc) {
  if (n_sites < 1) throw ArgumentError("build_vbs_state: N must be >= 1");
  const auto dims = chain_site_dims(n_sites, bc);
  check_amplitude_capacity(dims);

  const DenseTensor d = singlet_coefficients();
  const DenseTensor w = build_isometry().w;

  // open axes: (left end, i_1, ..., i_{r-1}, a_r)
  DenseTensor chain = bc == Boundary::obc ? d : DenseTensor::identity(2);
  for (unsigned r = 0; r < n_sites; ++r) {
    chain = contract(chain, d, {});  // (..., a_r, a'_r, a_{r+1})
    const std::size_t k = chain.rank() - 3;
    chain = contract(chain, w, {{k, 1}, {k + 1, 2}});  // (..., a_{r+1}, i_r)
    std::vector<std::size_t> order(chain.rank());
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[order.size() - 1], order[order.size() - 2]);
    chain = permute(chain, order);
  }
  if (bc == Boundary::pbc)
    chain = contract(chain, DenseTensor::identity(2), {{0, 0}, {chain.rank() - 1, 1}});

  return {dims, {chain.entries().begin(), chain.entries().end()}, false};
}

DenseTensor aklt_bond_term() {
  const auto& s = spin_operators().spin_one;
  const DenseTensor heis = heisenberg_coupling(s, s);
  return heis + (1.0 / 3.0) * matmul(heis, heis);
}

DenseTensor boundary_projector(bool half_first) {
  const auto& ops = spin_operators();
  const DenseTensor coupling = half_first ? heisenberg_coupling(ops.spin_half, ops.spin_one)
                                          : heisenberg_coupling(ops.spin_one, ops.spin_half);
  return (2.0 / 3.0) * (DenseTensor::identity(6) + coupling);
}

DenseTensor embed_operator(const DenseTensor& op, std::span<const std::size_t> site_dims,
                           std::span<const std::size_t> sites) {
  const std::size_t total = product(site_dims);
  DenseTensor out = DenseTensor::matrix(total, total);
  for_each_embedded(op, site_dims, sites,
                    [&](std::size_t row, std::size_t col, cplx v) { out(row, col) += v; });
  return out;
}

std::vector<cplx> apply_operator(const DenseTensor& op, const DenseState& state,
                                 std::span<const std::size_t> sites) {
  std::vector<cplx> out(state.amplitudes.size());
  for_each_embedded(op, state.site_dims, sites, [&](std::size_t row, std::size_t col, cplx v) {
    out[row] += v * state.amplitudes[col];
  });
  return out;
}

DenseTensor build_hamiltonian(unsigned n_sites, Boundary bc) {
  if (n_sites < 2) throw ArgumentError("build_hamiltonian: N must be >= 2");
  const auto dims = chain_site_dims(n_sites, bc);
  std::size_t total = 1;
  for (auto d : dims) {
    total *= d;
    if (total > kMaxHamiltonianDim)
      throw CapacityError("Hamiltonian dimension exceeds 1e4", total);
  }

  DenseTensor h = DenseTensor::matrix(total, total);
  auto add = [&](const DenseTensor& op, std::initializer_list<std::size_t> sites) {
    for_each_embedded(op, dims, std::span(sites.begin(), sites.size()),
                      [&](std::size_t row, std::size_t col, cplx v) { h(row, col) += v; });
  };
  const DenseTensor bond = aklt_bond_term();
  if (bc == Boundary::obc) {
    for (std::size_t r = 1; r < n_sites; ++r) add(bond, {r, r + 1});
    add(boundary_projector(true), {0, 1});
    add(boundary_projector(false), {n_sites, std::size_t{n_sites} + 1});
  } else {
    for (std::size_t r = 0; r < n_sites; ++r) add(bond, {r, (r + 1) % n_sites});
  }
  return h;
}

bool GroundStateReport::passed() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.passed; });
}

GroundStateReport ground_state_report(unsigned n_sites, Boundary bc) {
  GroundStateReport report;
  report.n_sites = n_sites;
  report.bc = bc;
  report.expected_energy =
      bc == Boundary::obc ? -2.0 * (n_sites - 1) / 3.0 : -2.0 * n_sites / 3.0;

  const DenseTensor h = build_hamiltonian(n_sites, bc);
  const DenseState psi = build_vbs_state(n_sites, bc);

  const DenseTensor hpsi = matvec(h, DenseTensor::vector(psi.amplitudes));
  double res = 0.0;
  for (std::size_t k = 0; k < hpsi.size(); ++k)
    res += std::norm(hpsi[k] - report.expected_energy * psi.amplitudes[k]);
  report.residual = std::sqrt(res / psi.norm_squared());

  const std::vector<double> spectrum = eigvals_hermitian(h);
  report.lowest_eigenvalue = spectrum.front();
  constexpr double degeneracy_tol = 1e-8;
  auto above = std::find_if(spectrum.begin(), spectrum.end(), [&](double e) {
    return e > report.lowest_eigenvalue + degeneracy_tol;
  });
  report.ground_degeneracy = static_cast<std::size_t>(above - spectrum.begin());
  report.gap = above == spectrum.end() ? 0.0 : *above - report.lowest_eigenvalue;

  auto fmt = [](double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
  };
  const double energy_err = std::abs(report.lowest_eigenvalue - report.expected_energy);
  report.clauses.push_back({"ground_energy", energy_err <= 1e-10 * std::max(1.0, std::abs(report.expected_energy)),
                            "|E0 - expected| = " + fmt(energy_err)});
  report.clauses.push_back(
      {"vbs_residual", report.residual <= 1e-10, "||(H - E0)psi||/||psi|| = " + fmt(report.residual)});
  report.clauses.push_back({"gap_positive", report.gap > degeneracy_tol, "gap = " + fmt(report.gap)});
  if (bc == Boundary::obc)
    report.clauses.push_back({"unique_ground_state", report.ground_degeneracy == 1,
                              "degeneracy = " + std::to_string(report.ground_degeneracy)});
  return report;
}

GroundStateReport verify_ground_state(unsigned n_sites, Boundary bc) {
  GroundStateReport report = ground_state_report(n_sites, bc);
  if (!report.passed()) {
    std::string failed;
    for (const auto& c : report.clauses)
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name + " (" + c.detail + ")";
    throw VerificationError("verify_ground_state failed: " + failed);
  }
  return report;
}

DenseTensor reduced_density_matrix(const DenseState& state, std::size_t first, std::size_t length) {
  const std::size_t n = state.site_dims.size();
  if (length == 0) throw ArgumentError("reduced_density_matrix: empty block");
  if (first + length > n) throw ArgumentError("reduced_density_matrix: block out of range");
  if (length == n) throw ArgumentError("reduced_density_matrix: block covers the whole chain");

  const std::span<const std::size_t> dims(state.site_dims);
  const std::size_t left = product(dims.subspan(0, first));
  const std::size_t block = product(dims.subspan(first, length));
  const std::size_t right = product(dims.subspan(first + length));
  const double norm = state.norm_squared();

  DenseTensor rho = DenseTensor::matrix(block, block);
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t b = 0; b < block; ++b) {
      const cplx* row_b = state.amplitudes.data() + (l * block + b) * right;
      for (std::size_t bp = 0; bp < block; ++bp) {
        const cplx* row_bp = state.amplitudes.data() + (l * block + bp) * right;
        cplx s{};
        for (std::size_t r = 0; r < right; ++r) s += row_b[r] * std::conj(row_bp[r]);
        rho(b, bp) += s / norm;
      }
    }
  return rho;
}

std::vector<std::size_t> block_dims(const DenseState& state, unsigned block_length) {
  if (block_length < 1) throw ArgumentError("block_dims: L must be >= 1");
  const auto& dims = state.site_dims;
  const bool obc = !dims.empty() && dims.front() == 2;
  const std::size_t bulk = obc ? dims.size() - 2 : dims.size();
  if (bulk == 0 || bulk % block_length != 0)
    throw ArgumentError("block_dims: chain length " + std::to_string(bulk) +
                        " is not divisible into blocks of " + std::to_string(block_length));

  const std::size_t n_blocks = bulk / block_length;
  const std::size_t per_block = product(std::span(dims).subspan(obc ? 1 : 0, block_length));
  std::vector<std::size_t> out(n_blocks, per_block);
  if (obc) {
    out.front() *= dims.front();
    out.back() *= dims.back();
  }
  return out;
}

BlockProductAnsatz random_block_ansatz(std::span<const std::size_t> dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  BlockProductAnsatz phi;
  for (auto d : dims) {
    std::vector<cplx> v(d);
    double n = 0.0;
    for (auto& x : v) {
      x = {gauss(rng), gauss(rng)};
      n += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(n);
    phi.blocks.push_back(std::move(v));
  }
  return phi;
}

namespace {

// psi with its block axes contracted against conj(phi_j) for every j except
// `keep`; returns the open vector on block `keep`.
DenseTensor contract_all_but(const DenseTensor& psi, const BlockProductAnsatz& phi,
                             std::size_t keep) {
  DenseTensor x = psi;
  for (std::size_t j = phi.blocks.size(); j-- > 0;) {
    if (j == keep) continue;
    std::vector<cplx> c(phi.blocks[j].size());
    std::transform(phi.blocks[j].begin(), phi.blocks[j].end(), c.begin(),
                   [](cplx z) { return std::conj(z); });
    x = contract(x, DenseTensor::vector(std::move(c)), {{j, 0}});
  }
  return x;
}

}  // namespace

cplx overlap_full(const DenseState& state, unsigned block_length, const BlockProductAnsatz& phi) {
  const auto dims = block_dims(state, block_length);
  if (phi.blocks.size() != dims.size()) throw ArgumentError("overlap_full: block count mismatch");
  const DenseTensor psi(dims, state.amplitudes);
  const DenseTensor open = contract_all_but(psi, phi, 0);
  std::vector<cplx> c(phi.blocks[0].size());
  std::transform(phi.blocks[0].begin(), phi.blocks[0].end(), c.begin(),
                 [](cplx z) { return std::conj(z); });
  return contract(open, DenseTensor::vector(std::move(c)), {{0, 0}})[0];
}

cplx overlap_mps(unsigned n_sites, Boundary bc, unsigned block_length,
                 const BlockProductAnsatz& phi) {
  if (block_length < 1 || n_sites % block_length != 0)
    throw ArgumentError("overlap_mps: N must be divisible by L");
  const std::size_t n_blocks = n_sites / block_length;
  if (phi.blocks.size() != n_blocks) throw ArgumentError("overlap_mps: block count mismatch");

  const DenseTensor bulk = block_site_tensor(build_site_tensor(), block_length);  // {I, a, b}
  const SingletFactors pq = build_singlet_factors();
  const std::size_t phys = bulk.dim(0);

  // block tensors in the common shape {physical, left bond, right bond}
  auto block_tensor = [&](std::size_t k) {
    const bool first = bc == Boundary::obc && k == 0;
    const bool last = bc == Boundary::obc && k + 1 == n_blocks;
    DenseTensor t = bulk;
    if (first) t = contract(pq.p, t, {{1, 1}});  // {a', I, b}
    if (last) {
      t = contract(t, pq.q, {{t.rank() - 1, 1}});  // {..., a}
      if (!first) t = permute(t, {0, 2, 1});       // {I, a, alpha}
    }
    const std::size_t p = phys * (first ? 2 : 1) * (last ? 2 : 1);
    return t.reshaped({p, first ? 1u : 2u, last ? 1u : 2u});
  };

  DenseTensor acc;
  for (std::size_t k = 0; k < n_blocks; ++k) {
    const DenseTensor t = block_tensor(k);
    if (phi.blocks[k].size() != t.dim(0)) throw ArgumentError("overlap_mps: block dimension mismatch");
    std::vector<cplx> c(phi.blocks[k].size());
    std::transform(phi.blocks[k].begin(), phi.blocks[k].end(), c.begin(),
                   [](cplx z) { return std::conj(z); });
    const DenseTensor projected = contract(DenseTensor::vector(std::move(c)), t, {{0, 0}});
    acc = k == 0 ? projected : matmul(acc, projected);
  }
  return bc == Boundary::obc ? acc(0, 0) : trace(acc);
}

ExactGeometricEntanglement exact_geometric_entanglement(const DenseState& state,
                                                        unsigned block_length, unsigned restarts,
                                                        std::uint64_t seed) {
  if (restarts < 1) throw ArgumentError("exact_geometric_entanglement: restarts must be >= 1");
  const auto dims = block_dims(state, block_length);
  const DenseState unit = state.normalized_copy();
  const DenseTensor psi(dims, unit.amplitudes);

  constexpr double tolerance = 1e-12;
  constexpr std::size_t max_sweeps = 10'000;
  // half-steps may only lose rounding noise
  constexpr double monotone_slack = 1e-13;

  ExactGeometricEntanglement out;
  out.n_blocks = static_cast<unsigned>(dims.size());
  for (unsigned restart = 0; restart < restarts; ++restart) {
    BlockProductAnsatz phi = random_block_ansatz(dims, seed + restart);
    double objective = std::norm(overlap_full(unit, block_length, phi));
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = objective;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        const DenseTensor open = contract_all_but(psi, phi, k);
        const double n = frobenius_norm(open);
        if (n == 0.0) continue;
        const double updated = n * n;
        if (updated < objective - monotone_slack)
          throw NumericError("exact_geometric_entanglement: objective decreased", objective - updated);
        objective = updated;
        for (std::size_t i = 0; i < open.size(); ++i) phi.blocks[k][i] = open[i] / n;
      }
      ++out.sweeps;
      if (objective - before < tolerance) break;
    }
    out.restart_objectives.push_back(objective);
    if (objective > out.lambda_max_sq) {
      out.lambda_max_sq = objective;
      out.best = phi;
    }
  }
  out.per_block = -std::log(out.lambda_max_sq) / out.n_blocks;
  return out;
}

double exact_correlator(const DenseState& state, std::size_t i, std::size_t j) {
  const auto& dims = state.site_dims;
  if (i >= dims.size() || j >= dims.size()) throw ArgumentError("exact_correlator: site out of range");
  if (dims[i] != 3 || dims[j] != 3)
    throw ArgumentError("exact_correlator: both sites must be spin-1 bulk sites");

  cplx total{};
  const std::array<std::size_t, 1> site_j{j}, site_i{i};
  for (const auto& op : spin_operators().spin_one) {
    DenseState tmp = state;
    tmp.amplitudes = apply_operator(op, state, site_j);
    const std::vector<cplx> both = apply_operator(op, tmp, site_i);
    for (std::size_t k = 0; k < both.size(); ++k) total += std::conj(state.amplitudes[k]) * both[k];
  }
  return total.real() / state.norm_squared();
}

}  // namespace vbs
