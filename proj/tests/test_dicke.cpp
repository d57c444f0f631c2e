#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "stoqbell/block_matrix.hpp"
#include "stoqbell/dicke.hpp"
#include "stoqbell/full_space.hpp"

using namespace stoqbell;
using Cd = std::complex<double>;

namespace {

Eigen::MatrixXcd collective(Pauli p, int two_j) {
  Eigen::MatrixXcd m(two_j + 1, two_j + 1);
  const Pauli f[1] = {p};
  for (int k = 0; k <= two_j; ++k)
    for (int l = 0; l <= two_j; ++l)
      m(k, l) = pi_pauli_product_element(std::span<const Pauli>(f, 1), two_j, k, l);
  return m;
}

Eigen::MatrixXcd element_matrix(std::vector<Pauli> seq, int two_j) {
  Eigen::MatrixXcd m(two_j + 1, two_j + 1);
  for (int k = 0; k <= two_j; ++k)
    for (int l = 0; l <= two_j; ++l)
      m(k, l) = pi_pauli_product_element(std::span<const Pauli>(seq.data(), seq.size()),
                                         two_j, k, l);
  return m;
}

Eigen::VectorXd random_alpha(int order, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd a(coefficient_count(order));
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(rng);
  return a;
}

}  // namespace

TEST_CASE("gamma and xi") {
  CHECK(gamma(0, 10) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  CHECK(gamma(9, 10) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  CHECK(gamma(4, 10) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-14));
  CHECK(xi(0, 10) == 10.0);
  CHECK(xi(10, 10) == -10.0);
  CHECK(xi(3, 7) == 1.0);
  CHECK_THROWS_AS(gamma(-1, 10), DomainError);
  CHECK_THROWS_AS(gamma(10, 10), DomainError);
  CHECK_THROWS_AS(xi(11, 10), DomainError);
}

TEST_CASE("single-letter collective operators match the full space") {
  const int n = 5;
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const Pauli seq[1] = {p};
    Eigen::MatrixXcd full = pauli_tuple_sum_full(n, std::span<const Pauli>(seq, 1));
    Eigen::MatrixXcd d(n + 1, 1L << n);
    for (int k = 0; k <= n; ++k) d.row(k) = dicke_vector(n, k).cast<Cd>().transpose();
    Eigen::MatrixXcd proj = d * full * d.adjoint();
    CHECK((proj - collective(p, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("product elements equal products of single-letter operators") {
  const std::vector<std::vector<Pauli>> seqs = {
      {Pauli::X, Pauli::X}, {Pauli::Y, Pauli::Y}, {Pauli::X, Pauli::Y},
      {Pauli::Y, Pauli::X}, {Pauli::X, Pauli::Z}, {Pauli::Z, Pauli::X},
      {Pauli::Y, Pauli::Z}, {Pauli::Z, Pauli::Y}, {Pauli::Z, Pauli::Z},
      {Pauli::Z, Pauli::Z, Pauli::Z}, {Pauli::Z, Pauli::Z, Pauli::X},
      {Pauli::Z, Pauli::X, Pauli::X}, {Pauli::X, Pauli::X, Pauli::X},
      {Pauli::X, Pauli::Z, Pauli::Z}, {Pauli::Y, Pauli::Z, Pauli::Z},
      {Pauli::Y, Pauli::Z, Pauli::X}, {Pauli::Z, Pauli::Y, Pauli::X},
      {Pauli::Y, Pauli::X, Pauli::X}};
  for (int two_j : {1, 2, 5, 8}) {
    for (const auto& seq : seqs) {
      Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1);
      for (Pauli p : seq) prod = prod * collective(p, two_j);
      const auto closed = element_matrix(seq, two_j);
      INFO("2J=", two_j, " seq size ", seq.size());
      CHECK((prod - closed).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("frozen product-element values") {
  CHECK(pi_pauli_product_element({Pauli::Z}, 10, 0, 0) == Cd(10.0, 0.0));
  const int two_j = 9;
  for (int k = 0; k <= two_j; ++k) {
    const double g2 = k <= two_j - 1 ? (k + 1.0) * (two_j - k) : 0.0;
    const double gm2 = k >= 1 ? k * (two_j - k + 1.0) : 0.0;
    CHECK(pi_pauli_product_element({Pauli::X, Pauli::X}, two_j, k, k).real() ==
          doctest::Approx(g2 + gm2).epsilon(1e-13));
  }
  CHECK_THROWS_AS(pi_pauli_product_element({Pauli::Z, Pauli::X, Pauli::Y}, 4, 0, 0),
                  UnsupportedOperator);
  CHECK_THROWS_AS(pi_pauli_product_element({Pauli::X}, 4, 5, 0), DomainError);
}

TEST_CASE("measurement bands: frozen values and order truncation") {
  const MeasurementParamsd p(std::numbers::pi / 6, 5 * std::numbers::pi / 6);
  const BlockSpec block = BlockSpec::symmetric(10);
  const auto d2 = pi_measurement_band("01", p, block, 2);
  for (int k = 0; k < 9; ++k)
    CHECK(d2[k] == doctest::Approx(gamma(k, 10) * gamma(k + 1, 10) / 4.0).epsilon(1e-13));
  const auto d3 = pi_measurement_band("01", p, block, 3);
  CHECK(d3.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pi_measurement_band("0", p, block, 1).size() == 10);
  CHECK_THROWS_AS(pi_measurement_band("10", p, block, 1), UnsupportedOperator);
  CHECK_THROWS_AS(pi_measurement_band("0", p, block, 11), DomainError);
}

TEST_CASE("build_block: reference two-body operator at n = 10") {
  Eigen::VectorXd alpha(5);
  alpha << -2, 0, 0.5, -1, 0.5;
  const BellCoefficientsd coeffs(2, alpha);
  const MeasurementParamsd p(std::numbers::pi / 6, 5 * std::numbers::pi / 6);
  const auto m = build_block(coeffs, p, BlockSpec::symmetric(10));
  REQUIRE(m.bandwidth() == 2);
  for (int k = 0; k < 10; ++k)
    CHECK(m.bands[1][k] == doctest::Approx(-gamma(k, 10)).epsilon(1e-12));
  CHECK(m.bands[2].cwiseAbs().maxCoeff() < 1e-14);
  const auto rep = check_stoquastic(m);
  CHECK(rep.stoquastic);
}

TEST_CASE("build_block: single party is the bare measurement") {
  Eigen::VectorXd alpha(2);
  alpha << 1, 0;
  const MeasurementParamsd p(0.8, 0.1);
  const auto m = build_block(BellCoefficientsd(1, alpha), p, BlockSpec::symmetric(1));
  CHECK(m.dim == 2);
  CHECK(m.bands[0][0] == doctest::Approx(std::cos(0.8)));
  CHECK(m.bands[0][1] == doctest::Approx(-std::cos(0.8)));
  CHECK(m.bands[1][0] == doctest::Approx(std::sin(0.8)));
}

TEST_CASE("oracle equivalence on random operators") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<int> pick_n(1, 7);
  for (int order : {1, 2, 3}) {
    for (int rep = 0; rep < 12; ++rep) {
      const int n = std::max(pick_n(rng), order == 3 ? 3 : order);
      const MeasurementParamsd p(ang(rng), ang(rng));
      const BellCoefficientsd coeffs(order, random_alpha(order, rng));
      const auto banded = build_block(coeffs, p, BlockSpec::symmetric(n)).dense();
      const auto oracle = brute_force_block(coeffs, p, n);
      INFO("order ", order, " n ", n);
      CHECK((banded - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("brute force: diagonal measurement at phi = 0") {
  Eigen::VectorXd alpha(5);
  alpha << 1, 0, 0, 0, 0;
  const auto m = brute_force_block(BellCoefficientsd(2, alpha),
                                   MeasurementParamsd(0.0, 1.0), 2);
  Eigen::MatrixXd expect(3, 3);
  expect << 2, 0, 0, 0, 0, 0, 0, 0, -2;
  CHECK((m - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("check_stoquastic reports the worst offender") {
  SymmetricBlockMatrixd m(4, 2);
  m.bands[1] << -1, 2e-9, -3;
  m.bands[2] << 1e-12, -0.5;
  const auto rep = check_stoquastic(m, 1e-10);
  CHECK(!rep.stoquastic);
  CHECK(rep.worst_d == 1);
  CHECK(rep.worst_k == 1);
  CHECK(rep.worst_value == doctest::Approx(2e-9));
  CHECK(check_stoquastic(m, 1e-8).stoquastic);
}

TEST_CASE("computational-basis embedding of a stoquastic block") {
  Eigen::VectorXd alpha(5);
  alpha << -2, 0, 0.5, -1, 0.5;
  const MeasurementParamsd p(std::numbers::pi / 6, 5 * std::numbers::pi / 6);
  for (int n : {4, 5}) {
    const auto block = build_block(BellCoefficientsd(2, alpha), p, BlockSpec::symmetric(n));
    const auto emb = embed_computational(block, n);
    CHECK(emb.shift == doctest::Approx(-block.bands[0].maxCoeff() - 1.0));
    CHECK(emb.report.stoquastic);
    CHECK(emb.report.worst_value <= 1e-12);
    Eigen::MatrixXd dense = Eigen::MatrixXd(emb.op);
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // spot check: worst off-diagonal of the dense matrix agrees with report
    double worst = -1e300;
    for (long r = 0; r < dense.rows(); ++r)
      for (long c = 0; c < dense.cols(); ++c)
        if (r != c) worst = std::max(worst, dense(r, c));
    CHECK(worst == doctest::Approx(emb.report.worst_value).epsilon(1e-12));
  }
  CHECK_THROWS_AS(embed_computational(SymmetricBlockMatrixd(3, 1), 4), ContractViolation);
}

TEST_CASE("joint angle shifts preserve the full spectrum") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = 4 + rep % 2;
    const BellCoefficientsd coeffs(2, random_alpha(2, rng));
    const MeasurementParamsd p(ang(rng), ang(rng));
    CHECK(spectrum_shift_check(coeffs, p, n, 0.37) < 1e-8);
  }
}

TEST_CASE("three-factor tuple identity in the full space") {
  // S_{P1 P2 P3} = S1 S2 S3 - S'_{12} S3 - S'_{13} S2 - S1 S'_{23} + S'_{123} + S'_{132}
  const int n = 4;
  const std::vector<std::vector<Pauli>> triples = {
      {Pauli::Z, Pauli::Z, Pauli::X},
      {Pauli::Y, Pauli::Z, Pauli::X},
      {Pauli::X, Pauli::X, Pauli::X},
      {Pauli::Z, Pauli::Y, Pauli::X}};
  for (const auto& t : triples) {
    const auto S = [&](std::vector<Pauli> seq) {
      return pauli_tuple_sum_full(n, std::span<const Pauli>(seq.data(), seq.size()));
    };
    const auto Sp = [&](std::vector<Pauli> seq) {
      return pauli_same_site_full(n, std::span<const Pauli>(seq.data(), seq.size()));
    };
    Eigen::MatrixXcd lhs = S(t);
    Eigen::MatrixXcd rhs = S({t[0]}) * S({t[1]}) * S({t[2]})
        - Sp({t[0], t[1]}) * S({t[2]})
        - Sp({t[0], t[2]}) * S({t[1]})
        - S({t[0]}) * Sp({t[1], t[2]})
        + Sp({t[0], t[1], t[2]})
        + Sp({t[0], t[2], t[1]});
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pair tuple sum keeps the imaginary single-site correction") {
  // S_{ZX} = S_Z S_X - i S_Y; dropping the i is a known pitfall.
  const int n = 5;
  const std::vector<Pauli> zx = {Pauli::Z, Pauli::X};
  const Eigen::MatrixXcd lhs = pauli_tuple_sum_full(n, std::span<const Pauli>(zx.data(), 2));
  const std::vector<Pauli> z = {Pauli::Z}, x = {Pauli::X}, y = {Pauli::Y};
  const Eigen::MatrixXcd rhs =
      pauli_tuple_sum_full(n, std::span<const Pauli>(z.data(), 1)) *
          pauli_tuple_sum_full(n, std::span<const Pauli>(x.data(), 1)) -
      Cd(0, 1) * pauli_tuple_sum_full(n, std::span<const Pauli>(y.data(), 1));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}
