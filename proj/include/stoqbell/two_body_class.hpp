#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "stoqbell/block_matrix.hpp"
#include "stoqbell/dicke.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// Parameters of the tangent two-body inequality class. Scale parameters x, y
// are positive integers; sigma and tau are signs.
struct ClassParams {
  int x = 1;
  int y = 1;
  int mu = 0;
  int sigma = -1;
  int tau = -1;

  void validate() const {
    if (x < 1 || y < 1) throw DomainError("ClassParams: x and y must be >= 1");
    if (mu < 0) throw DomainError("ClassParams: mu must be >= 0");
    if (sigma * sigma != 1 || tau * tau != 1)
      throw DomainError("ClassParams: sigma and tau must be +1 or -1");
  }
};

// Tangency bookkeeping, advisory only: for even n, mu and x should have
// opposite parity; for odd n, mu and y should. Stoquasticity never uses it.
inline bool parity_consistent(const ClassParams& p, int n) {
  const int partner = n % 2 == 0 ? p.x : p.y;
  return (p.mu + partner) % 2 == 1;
}

template <typename Scalar>
struct BlockVerdict {
  int two_j = 0;
  StoqReport<Scalar> report;
};

template <typename Scalar>
struct ClassConditionReport {
  Scalar A_prime = 0;  // alpha sin(phi) + beta sin(theta)
  Scalar C = 0;        // gamma sin^2(phi) + 2 delta sin(phi)sin(theta) + eps sin^2(theta)
  Scalar D = 0;        // gamma cs + delta(c st + ct s) + eps ct st
  bool condition_C_met = false;  // x sin(phi) + sigma y sin(theta) = 0
  bool condition_A_met = false;  // x tau (x+y) sin(phi) <= 0
  std::vector<BlockVerdict<Scalar>> per_block;

  bool all_blocks_stoquastic() const {
    for (const auto& b : per_block)
      if (!b.report.stoquastic) return false;
    return !per_block.empty();
  }
};

using ClassConditionReportd = ClassConditionReport<double>;

// Coefficient vector (alpha, beta, gamma/2, delta, eps/2); the two same-input
// two-body weights enter halved because each unordered pair is counted twice
// in the operator basis.
template <typename Scalar>
BellCoefficients<Scalar> class_to_coeffs(const ClassParams& p) {
  p.validate();
  const Scalar x = p.x, y = p.y, mu = p.mu;
  VectorX<Scalar> alpha(5);
  alpha << x * (p.sigma * mu + p.tau * (x + y)), mu * y, x * x / Scalar(2), p.sigma * x * y,
      y * y / Scalar(2);
  return BellCoefficients<Scalar>(2, alpha);
}

template <typename Scalar>
ClassConditionReport<Scalar> stoq_conditions(const ClassParams& p,
                                             const MeasurementParams<Scalar>& params,
                                             Scalar eq_tol = Scalar(1e-10),
                                             Scalar slack_tol = Scalar(1e-12)) {
  using std::cos;
  using std::sin;
  p.validate();
  const Scalar s = sin(params.phi), c = cos(params.phi);
  const Scalar st = sin(params.theta), ct = cos(params.theta);
  const Scalar x = p.x, y = p.y;
  const Scalar gamma = x * x, delta = p.sigma * x * y, eps = y * y;

  ClassConditionReport<Scalar> rep;
  rep.A_prime = x * (p.sigma * p.mu + p.tau * (x + y)) * s + p.mu * y * st;
  rep.C = gamma * s * s + 2 * delta * s * st + eps * st * st;
  rep.D = gamma * c * s + delta * (c * st + ct * s) + eps * ct * st;
  rep.condition_C_met = std::abs(x * s + p.sigma * y * st) <= eq_tol;
  rep.condition_A_met = x * p.tau * (x + y) * s <= slack_tol;
  return rep;
}

// All theta in [-pi, pi) with x sin(phi) + sigma y sin(theta) = 0; zero, one,
// or two solutions.
template <typename Scalar>
std::vector<Scalar> matching_angles(const ClassParams& p, Scalar phi) {
  p.validate();
  const Scalar v = -Scalar(p.sigma) * Scalar(p.x) * std::sin(phi) / Scalar(p.y);
  std::vector<Scalar> out;
  if (std::abs(v) > 1) return out;
  const Scalar t1 = wrap_angle(std::asin(v));
  out.push_back(t1);
  const Scalar t2 = wrap_angle(std::numbers::pi_v<Scalar> - std::asin(v));
  if (std::abs(wrap_angle(t2 - t1)) > Scalar(1e-12)) out.push_back(t2);
  return out;
}

// Builds the operator in every block J (via the 2J-substituted band formulas)
// and checks stoquasticity. When both conditions hold, every block passes.
template <typename Scalar>
ClassConditionReport<Scalar> verify_all_blocks(const ClassParams& p,
                                               const MeasurementParams<Scalar>& params, int n,
                                               Scalar tol = Scalar(1e-9)) {
  if (n < 1 || n > 16) throw DomainError("verify_all_blocks: need 1 <= n <= 16");
  auto rep = stoq_conditions(p, params);
  const auto coeffs = class_to_coeffs<Scalar>(p);
  for (int two_j = n % 2; two_j <= n; two_j += 2) {
    const auto block = build_block(coeffs, params, BlockSpec{n, two_j});
    rep.per_block.push_back({two_j, check_stoquastic(block, tol)});
  }
  return rep;
}

}  // namespace stoqbell
