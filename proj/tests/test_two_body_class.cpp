#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stoqbell/dicke.hpp"
#include "stoqbell/two_body_class.hpp"

using namespace stoqbell;
namespace nb = std::numbers;

namespace {

ClassParams random_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(1, 4), coin(0, 1), m(0, 5);
  return ClassParams{small(rng), small(rng), m(rng), coin(rng) ? 1 : -1, coin(rng) ? 1 : -1};
}

// phi with the sign condition A requires and |x sin phi| <= y, so that a
// matching theta exists
double feasible_phi(const ClassParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double cap = std::min(1.0, static_cast<double>(p.y) / p.x);
  const double mag = std::asin(u(rng) * cap);
  return p.tau > 0 ? -mag : mag;
}

}  // namespace

TEST_CASE("parameter-to-coefficient map: pinned values") {
  const auto ref = class_to_coeffs<double>({1, 1, 0, -1, -1});
  Eigen::VectorXd expect(5);
  expect << -2, 0, 0.5, -1, 0.5;
  CHECK((ref.alpha - expect).cwiseAbs().maxCoeff() == 0.0);

  const auto flip = class_to_coeffs<double>({1, 1, 0, 1, 1});
  expect << 2, 0, 0.5, 1, 0.5;
  CHECK((flip.alpha - expect).cwiseAbs().maxCoeff() == 0.0);

  const auto mixed = class_to_coeffs<double>({1, 2, 1, 1, 1});
  expect << 4, 2, 0.5, 2, 2;
  CHECK((mixed.alpha - expect).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(class_to_coeffs<double>({0, 1, 0, 1, 1}), DomainError);
  CHECK_THROWS_AS(class_to_coeffs<double>({1, 1, -1, 1, 1}), DomainError);
  CHECK_THROWS_AS(class_to_coeffs<double>({1, 1, 0, 2, 1}), DomainError);
}

TEST_CASE("C is the perfect square of the matching condition") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-nb::pi, nb::pi);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_params(rng);
    const MeasurementParamsd angles(u(rng), u(rng));
    const auto rep_c = stoq_conditions(p, angles);
    const double root = p.x * std::sin(angles.phi) + p.sigma * p.y * std::sin(angles.theta);
    CHECK(rep_c.C == doctest::Approx(root * root).epsilon(1e-12));
    CHECK(rep_c.C >= -1e-12);
  }
}

TEST_CASE("matching angles: solution counts and exactness") {
  CHECK(matching_angles<double>({2, 1, 0, 1, 1}, nb::pi / 2).empty());

  const auto single = matching_angles<double>({1, 1, 0, 1, 1}, nb::pi / 2);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(-nb::pi / 2));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const auto p = random_params(rng);
    const double phi = feasible_phi(p, rng);
    const auto sols = matching_angles(p, phi);
    REQUIRE(!sols.empty());
    for (const double theta : sols) {
      CHECK(theta >= -nb::pi);
      CHECK(theta < nb::pi);
      CHECK(std::abs(p.x * std::sin(phi) + p.sigma * p.y * std::sin(theta)) < 1e-12);
      const auto rep_c = stoq_conditions(p, MeasurementParamsd(phi, theta));
      CHECK(rep_c.condition_C_met);
      CHECK(std::abs(rep_c.D) < 1e-12);  // D factors through the matching condition
    }
  }
}

TEST_CASE("band identities against build_block in every block") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-nb::pi, nb::pi);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = random_params(rng);
    const MeasurementParamsd angles(u(rng), u(rng));
    const auto rep_c = stoq_conditions(p, angles);
    const auto coeffs = class_to_coeffs<double>(p);
    const int n = 4 + rep % 7;
    for (int two_j = n % 2; two_j <= n; two_j += 2) {
      const auto block = build_block(coeffs, angles, BlockSpec{n, two_j});
      if (two_j == 0) continue;
      for (int k = 0; k < two_j; ++k) {
        const double u_k = (rep_c.A_prime + (two_j - 1 - 2 * k) * rep_c.D) * gamma<double>(k, two_j);
        CHECK(block(k, k + 1) == doctest::Approx(u_k).epsilon(1e-10));
      }
      for (int k = 0; k + 2 <= two_j; ++k) {
        const double v_k = rep_c.C * gamma<double>(k, two_j) * gamma<double>(k + 1, two_j) / 2;
        CHECK(block(k, k + 2) == doctest::Approx(v_k).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("conditions met implies all blocks stoquastic") {
  std::mt19937_64 rng(17);
  int done = 0;
  while (done < 25) {
    const auto p = random_params(rng);
    const double phi = feasible_phi(p, rng);
    const auto sols = matching_angles(p, phi);
    if (sols.empty()) continue;
    const MeasurementParamsd angles(phi, sols[static_cast<std::size_t>(done) % sols.size()]);
    for (int n : {7, 8}) {
      const auto rep = verify_all_blocks(p, angles, n);
      CHECK(rep.condition_C_met);
      CHECK(rep.condition_A_met);
      CHECK(rep.all_blocks_stoquastic());
      CHECK(rep.per_block.size() == static_cast<std::size_t>(n / 2 + 1));
    }
    ++done;
  }
}

TEST_CASE("reference parameters at mismatched angles break a block") {
  const auto rep = verify_all_blocks<double>({1, 1, 0, -1, -1}, MeasurementParamsd(0.3, 1.1), 8);
  CHECK(!rep.condition_C_met);
  CHECK(!rep.all_blocks_stoquastic());
}

TEST_CASE("pinned mixed-sign example satisfies both conditions") {
  const ClassParams p{1, 2, 0, 1, 1};
  const double phi = std::asin(-0.5), theta = std::asin(0.25);
  const auto rep = verify_all_blocks(p, MeasurementParamsd(phi, theta), 8);
  CHECK(rep.condition_C_met);
  CHECK(rep.condition_A_met);
  CHECK(rep.all_blocks_stoquastic());
}

TEST_CASE("vanishing sines: trivially stoquastic operator") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 5; ++rep) {
    const auto p = random_params(rng);
    const auto r = verify_all_blocks(p, MeasurementParamsd(0.0, nb::pi), 7);
    CHECK(r.all_blocks_stoquastic());
    CHECK(std::abs(r.A_prime) < 1e-12);
    CHECK(std::abs(r.C) < 1e-24);
    CHECK(std::abs(r.D) < 1e-12);
  }
}

TEST_CASE("parity advisory") {
  CHECK(parity_consistent({1, 1, 0, -1, -1}, 10));  // mu even, x odd
  CHECK(parity_consistent({1, 1, 0, -1, -1}, 9));   // mu even, y odd
  CHECK(!parity_consistent({2, 1, 0, -1, -1}, 10));
  CHECK(!parity_consistent({1, 2, 0, -1, -1}, 9));
}
