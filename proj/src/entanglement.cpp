#include "vbsge/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vbsge/aklt_mps.hpp"
#include "vbsge/errors.hpp"
#include "vbsge/spin.hpp"

namespace vbs {

namespace {

double alternating_ratio(unsigned block_length) { return std::pow(-1.0 / 3.0, block_length); }

const DenseTensor& unit_transfer() {
  static const DenseTensor a = transfer_matrix(build_site_tensor()).a;
  return a;
}

// Minimal 2-D Nelder-Mead maximizer over (theta, phi).
std::array<double, 2> nelder_mead_maximize(const auto& f, std::array<double, 2> start,
                                           double step, int max_iter) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> simplex{start, Point{start[0] + step, start[1]},
                               Point{start[0], start[1] + step}};
  std::array<double, 3> values{};
  for (int k = 0; k < 3; ++k) values[k] = f(simplex[k]);

  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    if (std::abs(values[best] - values[worst]) < 1e-16) break;

    const Point centroid{(simplex[best][0] + simplex[mid][0]) / 2,
                         (simplex[best][1] + simplex[mid][1]) / 2};
    const Point reflected = lerp(simplex[worst], centroid, 2.0);
    const double fr = f(reflected);
    if (fr > values[best]) {
      const Point expanded = lerp(simplex[worst], centroid, 3.0);
      const double fe = f(expanded);
      if (fe > fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr > values[mid]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const Point contracted = lerp(simplex[worst], centroid, 0.5);
      const double fc = f(contracted);
      if (fc > values[worst]) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (int k : {mid, worst}) {
          simplex[k] = lerp(simplex[best], simplex[k], 0.5);
          values[k] = f(simplex[k]);
        }
      }
    }
  }
  const auto best = std::max_element(values.begin(), values.end()) - values.begin();
  return simplex[best];
}

// Dominant left and right eigenvectors of A(1) as 2x2 environment
// matrices, normalized so that sum_{ab} l_ab r_ab = 1.
struct Environments {
  DenseTensor left;
  DenseTensor right;
  cplx eigenvalue;
};

Environments dominant_environments() {
  const DenseTensor& a = unit_transfer();
  const SpectralDecomposition right = eig_general(a);
  const SpectralDecomposition left = eig_general(transpose(a));
  DenseTensor r = DenseTensor::vector(right.eigenvectors.front());
  DenseTensor l = DenseTensor::vector(left.eigenvectors.front());
  cplx overlap{};
  for (std::size_t k = 0; k < 4; ++k) overlap += l[k] * r[k];
  l *= 1.0 / overlap;
  return {l.reshaped({2, 2}), r.reshaped({2, 2}), right.eigenvalues.front()};
}

// sum_{ij} O_ij M^j (x) conj(M^i): one transfer step with O inserted.
DenseTensor operator_transfer(const DenseTensor& op) {
  const SiteTensor m = build_site_tensor();
  DenseTensor e = DenseTensor::matrix(4, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (op(i, j) == cplx{}) continue;
      e += op(i, j) * kron(m.slice(j), conj(m.slice(i)));
    }
  return e;
}

}  // namespace

ProductAnsatz::ProductAnsatz(cplx alpha, cplx beta) : alpha_(alpha), beta_(beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw ArgumentError("ProductAnsatz: r must have unit norm");
}

ProductAnsatz ProductAnsatz::from_bloch(double theta, double phi) {
  return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
}

DenseTensor ProductAnsatz::doubled() const {
  return DenseTensor::vector({std::norm(alpha_), std::conj(alpha_) * beta_,
                              alpha_ * std::conj(beta_), std::norm(beta_)});
}

double ansatz_objective(const DenseTensor& block_transfer, const ProductAnsatz& r) {
  const DenseTensor v = r.doubled();
  return std::abs(inner(v, matvec(block_transfer, v)));
}

double d_squared_closed(unsigned block_length) {
  if (block_length < 1) throw ArgumentError("d_squared_closed: L must be >= 1");
  return 0.5 * (std::pow(0.75, block_length) + std::pow(-0.25, block_length));
}

std::vector<ProductAnsatz> bloch_grid(std::size_t count) {
  std::vector<ProductAnsatz> grid;
  grid.reserve(count);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double z = count == 1 ? 1.0 : 1.0 - 2.0 * static_cast<double>(k) / (count - 1);
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    grid.push_back(ProductAnsatz::from_bloch(theta, golden_angle * static_cast<double>(k)));
  }
  return grid;
}

MaximizationResult d_squared_maximized(unsigned block_length, std::size_t samples) {
  if (block_length < 1) throw ArgumentError("d_squared_maximized: L must be >= 1");
  if (samples < 1) throw ArgumentError("d_squared_maximized: sample count must be >= 1");

  const DenseTensor a_block = block_transfer({unit_transfer(), 1}, block_length).a;
  const double closed = d_squared_closed(block_length);
  const auto grid = bloch_grid(samples);

  std::vector<double> values;
  values.reserve(grid.size());
  for (const auto& r : grid) values.push_back(ansatz_objective(a_block, r));

  MaximizationResult out;
  out.samples = samples;
  const auto best = std::max_element(values.begin(), values.end()) - values.begin();
  out.d_squared = values[best];
  out.argmax = grid[best];

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
    out.max_deviation = std::max(out.max_deviation, std::abs(v - closed));
  }
  out.spread = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;

  // local polish from the best grid point
  const auto& seed = out.argmax;
  const double theta0 = 2.0 * std::acos(std::clamp(std::abs(seed.alpha()), 0.0, 1.0));
  const double phi0 = std::arg(seed.beta()) - std::arg(seed.alpha());
  auto objective = [&](const std::array<double, 2>& p) {
    return ansatz_objective(a_block, ProductAnsatz::from_bloch(p[0], p[1]));
  };
  const auto polished = nelder_mead_maximize(objective, {theta0, phi0}, 0.1, 200);
  const double polished_value = objective(polished);
  if (polished_value > out.d_squared + 1e-14) {
    out.d_squared = polished_value;
    out.argmax = ProductAnsatz::from_bloch(polished[0], polished[1]);
  }
  return out;
}

double entanglement_closed_form(unsigned block_length) {
  return std::numbers::ln2 - std::log(1.0 + alternating_ratio(block_length));
}

double entanglement_deviation(unsigned block_length) {
  return -std::log1p(alternating_ratio(block_length));
}

GeomEntReport geometric_entanglement_per_block(unsigned block_length, Method method,
                                               std::size_t samples) {
  if (block_length < 1) throw ArgumentError("geometric_entanglement_per_block: L must be >= 1");
  GeomEntReport report;
  report.block_length = block_length;
  report.method = method;
  if (method == Method::closed_form) {
    report.d_squared = d_squared_closed(block_length);
  } else {
    const MaximizationResult best = d_squared_maximized(block_length, samples);
    report.d_squared = best.d_squared;
    report.r_used = best.argmax;
    report.spread = best.spread;
  }
  report.e_per_block = -std::log(report.d_squared / std::pow(0.75, block_length));
  return report;
}

std::vector<TableRow> table_of_entanglement(unsigned l_max) {
  if (l_max < 1) throw ArgumentError("table_of_entanglement: l_max must be >= 1");
  std::vector<TableRow> rows;
  for (unsigned l = 1; l <= l_max; ++l)
    rows.push_back({l, geometric_entanglement_per_block(l).e_per_block, entanglement_deviation(l)});
  return rows;
}

double lambda_squared_estimate(unsigned block_length, unsigned n_blocks) {
  if (block_length < 1) throw ArgumentError("lambda_squared_estimate: L must be >= 1");
  const double per_block = d_squared_closed(block_length) / std::pow(0.75, block_length);
  return std::pow(per_block, static_cast<int>(n_blocks));
}

std::array<double, 4> rdm_eigenvalues(unsigned block_length) {
  const double x = alternating_ratio(block_length);
  const double small = (1.0 - x) / 4.0;
  return {(1.0 + 3.0 * x) / 4.0, small, small, small};
}

std::array<double, 4> block_rdm_spectrum_mps(unsigned block_length) {
  if (block_length < 1) throw ArgumentError("block_rdm_spectrum_mps: L must be >= 1");
  const Environments env = dominant_environments();
  const DenseTensor a_block =
      block_transfer({unit_transfer(), 1}, block_length).a.reshaped({2, 2, 2, 2});
  // G_{(beta,delta),(alpha,gamma)} = A(L)_{(alpha,beta),(gamma,delta)}
  const DenseTensor gram = permute(a_block, {1, 3, 0, 2}).reshaped({4, 4});
  const DenseTensor weighted = matmul(gram, kron(env.left, env.right));
  const SpectralDecomposition spec = eig_general(weighted);

  double total = 0.0;
  for (const auto& v : spec.eigenvalues) total += v.real();
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = spec.eigenvalues[k].real() / total;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double entropy_limit(LogBase base) { return base == LogBase::bit ? 2.0 : 2.0 * std::numbers::ln2; }

EntropyReport block_entropy(unsigned block_length, LogBase base) {
  if (block_length < 1) throw ArgumentError("block_entropy: L must be >= 1");
  const double x = alternating_ratio(block_length);
  const double unit = base == LogBase::bit ? 1.0 / std::numbers::ln2 : 1.0;

  EntropyReport report;
  report.block_length = block_length;
  report.base = base;
  report.eigenvalues = rdm_eigenvalues(block_length);
  double s = 0.0;
  for (double p : report.eigenvalues)
    if (p > 0.0) s -= p * std::log(p);
  report.entropy = s * unit;

  // entropy - log 4 = -(1/4)(1+3x)log(1+3x) - (3/4)(1-x)log(1-x); the
  // linear terms cancel, so small x goes through the series of
  // (1+u)log(1+u) = u + sum_{k>=2} (-u)^k / (k(k-1))
  double excess = 0.0;
  if (std::abs(x) < 1e-2) {
    for (int k = 2; k <= 14; ++k)
      excess += (0.25 * std::pow(-3.0 * x, k) + 0.75 * std::pow(x, k)) / (k * (k - 1.0));
  } else {
    const double lead = 1.0 + 3.0 * x > 0.0 ? (1.0 + 3.0 * x) * std::log1p(3.0 * x) : 0.0;
    excess = 0.25 * lead + 0.75 * (1.0 - x) * std::log1p(-x);
  }
  report.deviation = -excess * unit;

  // 0 log 0 = 0 at L = 1, where 1 + 3x vanishes
  const double big = 1.0 + 3.0 * x;
  const double big_term = big > 0.0 ? 0.25 * big * std::log1p(3.0 * x) : 0.0;
  const double printed_bits =
      2.0 + (0.75 * (1.0 - x) * std::log1p(-x) - big_term) / std::numbers::ln2;
  report.printed_formula = base == LogBase::bit ? printed_bits : printed_bits * std::numbers::ln2;
  return report;
}

double correlator(unsigned distance_l) {
  if (distance_l < 2) throw ArgumentError("correlator: L must be >= 2");
  const Environments env = dominant_environments();
  const DenseTensor left = env.left.reshaped({4});
  const DenseTensor right = env.right.reshaped({4});
  // <S> = 0 on every site, so the dominant pair drops out between the two
  // insertions; deflating it keeps rounding from growing like 3^L.
  DenseTensor deflated = unit_transfer();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) deflated(i, j) -= env.eigenvalue * right[i] * left[j];
  const DenseTensor middle = matrix_power(deflated, distance_l - 2);

  cplx total{};
  for (const auto& op : spin_operators().spin_one) {
    const DenseTensor e = operator_transfer(op);
    const DenseTensor chain = matmul(e, matmul(middle, e));
    const DenseTensor column = matvec(chain, right);
    for (std::size_t k = 0; k < 4; ++k) total += left[k] * column[k];
  }
  return (total / std::pow(env.eigenvalue, static_cast<int>(distance_l))).real();
}

double ring_correlator(unsigned n_sites, unsigned separation) {
  if (separation < 1 || separation >= n_sites)
    throw ArgumentError("ring_correlator: need 1 <= separation < N");
  const DenseTensor& a = unit_transfer();
  const DenseTensor inner_run = matrix_power(a, separation - 1);
  const DenseTensor outer_run = matrix_power(a, n_sites - separation - 1);
  cplx total{};
  for (const auto& op : spin_operators().spin_one) {
    const DenseTensor e = operator_transfer(op);
    total += trace(matmul(matmul(e, inner_run), matmul(e, outer_run)));
  }
  return (total / trace(matrix_power(a, n_sites))).real();
}

}  // namespace vbs
