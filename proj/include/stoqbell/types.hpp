#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "stoqbell/errors.hpp"

namespace stoqbell {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Wraps an angle into [-pi, pi).
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(a + std::numbers::pi_v<Scalar>, two_pi);
  if (r < Scalar(0)) r += two_pi;
  return r - std::numbers::pi_v<Scalar>;
}

// The two single-party measurement directions in the ZX plane:
// M_0 = cos(phi) Z + sin(phi) X, M_1 = cos(theta) Z + sin(theta) X.
template <typename Scalar = double>
struct MeasurementParams {
  Scalar phi = 0;
  Scalar theta = 0;

  MeasurementParams() = default;
  MeasurementParams(Scalar phi_, Scalar theta_)
      : phi(wrap_angle(phi_)), theta(wrap_angle(theta_)) {}
};

using MeasurementParamsd = MeasurementParams<double>;

// One total-spin block of an n-party permutation-invariant operator.
// J is kept as the integer 2J; dim = 2J + 1.
struct BlockSpec {
  int n = 1;
  int two_j = 1;

  BlockSpec() = default;
  BlockSpec(int n_, int two_j_) : n(n_), two_j(two_j_) {
    if (n < 1) throw DomainError("BlockSpec: n must be >= 1");
    if (two_j < 0 || two_j > n) throw DomainError("BlockSpec: need 0 <= 2J <= n");
    if ((n - two_j) % 2 != 0) throw DomainError("BlockSpec: 2J must have the parity of n");
  }

  static BlockSpec symmetric(int n_) { return BlockSpec(n_, n_); }

  int dim() const { return two_j + 1; }
};

inline int coefficient_count(int order) {
  switch (order) {
    case 1: return 2;
    case 2: return 5;
    case 3: return 9;
    default: throw DomainError("coefficient order must be 1, 2, or 3");
  }
}

// Coefficients of a symmetrized Bell operator B = sum_i alpha_i S_i,
// indexed (0, 1, 00, 01, 11, 000, 001, 011, 111) up to the given order.
template <typename Scalar = double>
struct BellCoefficients {
  int order = 2;
  VectorX<Scalar> alpha;

  BellCoefficients() : alpha(VectorX<Scalar>::Zero(5)) {}
  BellCoefficients(int order_, VectorX<Scalar> alpha_)
      : order(order_), alpha(std::move(alpha_)) {
    if (alpha.size() != coefficient_count(order))
      throw ContractViolation("BellCoefficients: length does not match order");
  }
};

using BellCoefficientsd = BellCoefficients<double>;

}  // namespace stoqbell
