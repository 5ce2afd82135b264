#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "vbsge/tensor.hpp"

namespace vbs {

/// Unit bond vector r = alpha|0> + beta|1>.
class ProductAnsatz {
 public:
  /// Throws ArgumentError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
  ProductAnsatz(cplx alpha, cplx beta);
  /// alpha = cos(theta/2), beta = exp(i phi) sin(theta/2).
  static ProductAnsatz from_bloch(double theta, double phi);

  cplx alpha() const noexcept { return alpha_; }
  cplx beta() const noexcept { return beta_; }

  /// |r>|r>* expanded as |alpha|^2|00>> + alpha* beta|01>> + alpha beta*|10>>
  /// + |beta|^2|11>>.
  DenseTensor doubled() const;

 private:
  cplx alpha_;
  cplx beta_;
};

/// |<<v| A(L) |v>>| with |v>> = ansatz.doubled() and its conjugate as bra.
double ansatz_objective(const DenseTensor& block_transfer, const ProductAnsatz& r);

/// (1/2)((3/4)^L + (-1/4)^L).
double d_squared_closed(unsigned block_length);

/// `count` points on the Bloch sphere from a Fibonacci lattice that
/// includes both poles (a single point is the north pole, r = (1, 0)).
std::vector<ProductAnsatz> bloch_grid(std::size_t count);

struct MaximizationResult {
  double d_squared = 0.0;
  ProductAnsatz argmax{1.0, 0.0};
  double spread = 0.0;         // sample standard deviation over the grid
  double max_deviation = 0.0;  // max |objective - closed form| over the grid
  std::size_t samples = 0;
};

/// Grid search over the Bloch sphere plus a Nelder-Mead polish of the best
/// grid point.
MaximizationResult d_squared_maximized(unsigned block_length, std::size_t samples);

enum class Method { closed_form, maximized };

struct GeomEntReport {
  unsigned block_length = 1;
  double d_squared = 0.0;
  double e_per_block = 0.0;  // nats
  Method method = Method::closed_form;
  std::optional<ProductAnsatz> r_used;
  double spread = 0.0;
};

/// E(L) = -log(|d|^2 / (3/4)^L).
GeomEntReport geometric_entanglement_per_block(unsigned block_length,
                                               Method method = Method::closed_form,
                                               std::size_t samples = 1000);

/// log 2 - log(1 + (-1/3)^L).
double entanglement_closed_form(unsigned block_length);
/// E(L) - log 2, accurate for large L.
double entanglement_deviation(unsigned block_length);

struct TableRow {
  unsigned block_length = 0;
  double e = 0.0;
  double deviation = 0.0;
};
std::vector<TableRow> table_of_entanglement(unsigned l_max);

/// (|d|^2 / (3/4)^L)^n_blocks; n_blocks = 0 gives 1.
double lambda_squared_estimate(unsigned block_length, unsigned n_blocks);

enum class LogBase { nat, bit };

/// {(1+3x)/4, (1-x)/4, (1-x)/4, (1-x)/4}, x = (-1/3)^L.
std::array<double, 4> rdm_eigenvalues(unsigned block_length);

/// Nonzero RDM spectrum of an infinite-chain block from the reshuffled A(L)
/// with dominant-eigenvector environments, descending.
std::array<double, 4> block_rdm_spectrum_mps(unsigned block_length);

struct EntropyReport {
  unsigned block_length = 0;
  std::array<double, 4> eigenvalues{};
  double entropy = 0.0;
  double deviation = 0.0;         // entropy - limit, accurate for large L
  double printed_formula = 0.0;   // the printed closed form, same base
  LogBase base = LogBase::nat;
};

EntropyReport block_entropy(unsigned block_length, LogBase base);
double entropy_limit(LogBase base);

/// <S^[1] . S^[L]> in the infinite chain, L >= 2.
double correlator(unsigned distance_l);

/// <S^[i] . S^[i+separation]> on a finite ring of n_sites.
double ring_correlator(unsigned n_sites, unsigned separation);

}  // namespace vbs
