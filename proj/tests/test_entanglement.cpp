#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vbsge/aklt_mps.hpp"
#include "vbsge/entanglement.hpp"
#include "vbsge/errors.hpp"
#include "vbsge/output.hpp"

using namespace vbs;

namespace {

std::string six(double x) { return format_number(x, Style::fixed, 6); }

DenseTensor a_of(unsigned l) { return block_transfer(transfer_matrix(build_site_tensor()), l).a; }

}  // namespace

TEST_CASE("product ansatz normalization") {
  CHECK_NOTHROW(ProductAnsatz(1.0, 0.0));
  CHECK_THROWS_AS(ProductAnsatz(1.0, 1.0), ArgumentError);
  const ProductAnsatz r = ProductAnsatz::from_bloch(1.1, 2.3);
  CHECK(std::abs(std::norm(r.alpha()) + std::norm(r.beta()) - 1.0) < 1e-12);

  const DenseTensor v = r.doubled();
  CHECK(std::abs(v[0] - std::norm(r.alpha())) < 1e-15);
  CHECK(std::abs(v[1] - std::conj(r.alpha()) * r.beta()) < 1e-15);
  CHECK(std::abs(v[2] - r.alpha() * std::conj(r.beta())) < 1e-15);
  CHECK(std::abs(v[3] - std::norm(r.beta())) < 1e-15);
}

TEST_CASE("d_squared closed form examples") {
  CHECK(d_squared_closed(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d_squared_closed(2) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
  CHECK(std::abs(d_squared_closed(200) * std::pow(4.0 / 3.0, 200) - 0.5) < 1e-12);
  for (unsigned l = 1; l <= 40; ++l) CHECK(d_squared_closed(l) > 0.0);
}

TEST_CASE("objective is independent of r") {
  const auto grid = bloch_grid(1000);
  REQUIRE(grid.size() == 1000);
  CHECK(std::abs(grid.front().alpha() - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(grid.back().beta()) - 1.0) < 1e-15);
  for (unsigned l = 1; l <= 12; ++l) {
    const DenseTensor al = a_of(l);
    double worst = 0.0;
    for (const auto& r : grid) worst = std::max(worst, std::abs(ansatz_objective(al, r) - d_squared_closed(l)));
    CHECK(worst <= 1e-12);
  }

  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  const DenseTensor a3 = a_of(3);
  for (int k = 0; k < 200; ++k) {
    const cplx x{g(rng), g(rng)}, y{g(rng), g(rng)};
    const double n = std::sqrt(std::norm(x) + std::norm(y));
    CHECK(std::abs(ansatz_objective(a3, ProductAnsatz(x / n, y / n)) - d_squared_closed(3)) < 1e-12);
  }
}

TEST_CASE("d_squared_maximized examples") {
  const MaximizationResult one = d_squared_maximized(1, 100);
  CHECK(std::abs(one.d_squared - 0.25) < 1e-10);
  CHECK(one.samples == 100);

  CHECK(d_squared_maximized(2, 100).spread < 1e-12);

  const MaximizationResult single = d_squared_maximized(4, 1);
  CHECK(std::abs(single.argmax.alpha() - 1.0) < 1e-15);
  CHECK(std::abs(single.d_squared - 0.5 * (std::pow(0.75, 4) + std::pow(0.25, 4))) < 1e-12);

  for (unsigned l = 1; l <= 12; ++l) {
    const MaximizationResult r = d_squared_maximized(l, 1000);
    CHECK(std::abs(r.d_squared - d_squared_closed(l)) <= 1e-10);
    CHECK(r.spread < 1e-12);
    CHECK(r.max_deviation <= 1e-12);
  }

  CHECK_THROWS_AS(d_squared_maximized(2, 0), ArgumentError);
}

TEST_CASE("E(L) examples and closed form") {
  CHECK(std::abs(geometric_entanglement_per_block(1).e_per_block - std::log(3.0)) < 1e-12);
  CHECK(six(geometric_entanglement_per_block(2).e_per_block) == "0.587787");
  CHECK(six(geometric_entanglement_per_block(14).e_per_block) == "0.693147");

  for (unsigned l = 1; l <= 30; ++l) {
    const GeomEntReport rep = geometric_entanglement_per_block(l);
    CHECK(rep.method == Method::closed_form);
    CHECK_FALSE(rep.r_used.has_value());
    CHECK(std::abs(rep.e_per_block - (std::log(2.0) - std::log1p(std::pow(-1.0 / 3.0, l)))) < 1e-12);
    CHECK(std::abs(entanglement_closed_form(l) - rep.e_per_block) < 1e-12);
  }

  const GeomEntReport maxed = geometric_entanglement_per_block(5, Method::maximized, 500);
  CHECK(maxed.r_used.has_value());
  CHECK(std::abs(maxed.e_per_block - entanglement_closed_form(5)) < 1e-9);
}

TEST_CASE("table rows at six decimals") {
  const auto rows = table_of_entanglement(14);
  REQUIRE(rows.size() == 14);
  CHECK(six(rows[4].e) == "0.697271");
  CHECK(six(rows[7].e) == "0.692995");
  CHECK(six(rows[11].e) == "0.693145");
  for (const auto& row : rows) CHECK(std::abs(row.deviation - (row.e - std::log(2.0))) < 1e-12);
}

TEST_CASE("E(L) alternates around log 2 within the (1/3)^L envelope") {
  for (unsigned l = 2; l <= 30; ++l) {
    const double dev = entanglement_deviation(l);
    const double x = std::pow(-1.0 / 3.0, l);
    CHECK((std::log(2.0) - entanglement_closed_form(l) > 0) == (x > 0));
    CHECK(std::abs(dev) <= 2.0 * std::pow(1.0 / 3.0, l));
  }
  // deviation keeps full relative precision where E(L) - log 2 would cancel
  CHECK(std::abs(entanglement_deviation(60) / -std::pow(1.0 / 3.0, 60) - 1.0) < 1e-12);
}

TEST_CASE("lambda squared estimate") {
  CHECK(lambda_squared_estimate(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(lambda_squared_estimate(3, 0) == 1.0);
  CHECK(six(-std::log(lambda_squared_estimate(2, 7)) / 7.0) == "0.587787");
  for (unsigned n = 1; n < 10; ++n) CHECK(lambda_squared_estimate(2, n + 1) < lambda_squared_estimate(2, n));
}

TEST_CASE("RDM eigenvalues: formula, MPS route, normalization") {
  const auto one = rdm_eigenvalues(1);
  CHECK(std::abs(one[0]) < 1e-15);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(one[k] - 1.0 / 3.0) < 1e-15);

  for (unsigned l = 1; l <= 20; ++l) {
    const auto p = rdm_eigenvalues(l);
    double sum = 0.0;
    for (double x : p) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);

    auto sorted = p;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto mps = block_rdm_spectrum_mps(l);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(mps[k] - sorted[k]) < 1e-12);
  }
}

TEST_CASE("block entropy examples") {
  CHECK(std::abs(block_entropy(1, LogBase::nat).entropy - std::log(3.0)) < 1e-12);
  const double s2 = -(1.0 / 3.0) * std::log(1.0 / 3.0) - 3.0 * (2.0 / 9.0) * std::log(2.0 / 9.0);
  CHECK(std::abs(block_entropy(2, LogBase::nat).entropy - s2) < 1e-12);
  CHECK(std::abs(block_entropy(50, LogBase::bit).entropy - 2.0) < 1e-12);
  CHECK(entropy_limit(LogBase::bit) == 2.0);
  CHECK(std::abs(entropy_limit(LogBase::nat) - 2.0 * std::log(2.0)) < 1e-15);
}

TEST_CASE("block entropy deviation and the printed expression") {
  for (unsigned l = 1; l <= 40; ++l) {
    const EntropyReport r = block_entropy(l, LogBase::bit);
    if (l <= 12) CHECK(std::abs(r.deviation - (r.entropy - 2.0)) < 1e-12);
    CHECK(r.deviation <= 0.0);
  }
  // deviation follows -(3/2) x^2 / log 2 (bits), so it decays by 1/9 per site
  for (unsigned l = 8; l <= 20; ++l) {
    const double ratio = block_entropy(l + 1, LogBase::nat).deviation / block_entropy(l, LogBase::nat).deviation;
    CHECK(std::abs(ratio - 1.0 / 9.0) < 1e-3);
  }
  // the printed closed form is not -sum p log p; it differs already at L = 1
  const EntropyReport r1 = block_entropy(1, LogBase::bit);
  CHECK(std::abs(r1.printed_formula - r1.entropy) > 1e-3);
}

TEST_CASE("correlator") {
  CHECK_THROWS_AS(correlator(1), ArgumentError);
  CHECK(std::abs(correlator(2) + 4.0 / 3.0) < 1e-12);
  for (unsigned l = 2; l <= 20; ++l) {
    CHECK(std::abs(correlator(l + 1) / correlator(l) + 1.0 / 3.0) < 1e-12);
    CHECK((correlator(l) < 0) == (l % 2 == 0));
  }
}

TEST_CASE("ring correlator") {
  const double n6[] = {-1.3442622950819674, 0.4918032786885247, -0.2950819672131147};
  const double n8[] = {-1.3345521023765992, 0.44972577696526506, -0.16453382084095064};
  for (unsigned s = 1; s <= 3; ++s) {
    CHECK(std::abs(ring_correlator(6, s) - n6[s - 1]) < 1e-12);
    CHECK(std::abs(ring_correlator(8, s) - n8[s - 1]) < 1e-12);
  }
  // a long ring approaches the infinite chain
  CHECK(std::abs(ring_correlator(60, 1) - correlator(2)) < 1e-12);
  CHECK(std::abs(ring_correlator(8, 3) - ring_correlator(8, 5)) < 1e-12);
}
