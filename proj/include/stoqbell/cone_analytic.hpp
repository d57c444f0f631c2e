#pragma once

#include <cmath>
#include <vector>

#include "stoqbell/cone.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

namespace detail {

template <typename Scalar>
void require_nondegenerate_sines(const MeasurementParams<Scalar>& params, Scalar tol) {
  using std::abs;
  using std::sin;
  if (abs(sin(params.phi)) < tol)
    throw AnalyticDegenerate("closed-form cone: sin(phi) vanishes");
  if (abs(sin(params.theta)) < tol)
    throw AnalyticDegenerate("closed-form cone: sin(theta) vanishes");
}

}  // namespace detail

// Closed-form solution of the two-body cone: three rays and two lines for
// generic angles. Ray orientation is fixed against the full hyperplane set;
// rays come back canonicalized exactly like the numeric pipeline's.
template <typename Scalar>
ConeDescription<Scalar> analytic_two_body(int n, const MeasurementParams<Scalar>& params,
                                          Scalar tol = Scalar(1e-9)) {
  using std::cos;
  using std::sin;
  if (n < 2) throw DomainError("analytic_two_body: need n >= 2");
  detail::require_nondegenerate_sines(params, Scalar(1e-9));
  const Scalar phi = params.phi, theta = params.theta;
  const Scalar s = sin(phi), st = sin(theta), ct = cos(theta);
  const Scalar csf = 1 / s, cst = 1 / st;

  const Scalar W = 24 * sin(theta - phi) + 4 * sin(3 * (theta - phi)) -
                   12 * sin(3 * theta - phi) + sin(5 * theta - phi) + 3 * sin(3 * theta + phi) -
                   3 * sin(theta + 3 * phi) - 12 * sin(theta - 3 * phi) + sin(theta - 5 * phi);
  const Scalar den01 =
      4 * (cos(2 * theta) + cos(2 * phi) - 2) * (2 * cos(2 * theta) + cos(2 * phi) - 3);
  const Scalar den1 =
      16 * (2 * std::pow(st, 4) * std::pow(csf, 4) + 3 * st * st * csf * csf + 1);
  const Scalar den3 = sin(theta + phi) + 4 * st * st * ct * csf;
  if (std::abs(den01) < Scalar(1e-10))
    throw AnalyticDegenerate("closed-form cone: shared ray denominator vanishes");
  if (std::abs(den3) < Scalar(1e-10))
    throw AnalyticDegenerate("closed-form cone: third ray denominator vanishes");

  VectorX<Scalar> r1(5), r2(5), r3(5);
  r1 << -(n - 1) * cst * W / den01, -(n - 1) * std::pow(csf, 5) * W / den1, 1,
      -st * s * (std::pow(cst, 4) - std::pow(csf, 4)) / (cst * cst + 2 * csf * csf),
      -(st * st * csf * csf + 2) / (2 * st * st * csf * csf + 1);
  r2 = r1;
  r2[0] = -r1[0];
  r2[1] = -r1[1];
  r3 << 0, 0, 1, (2 * std::pow(st, 3) * ct * csf * csf - sin(2 * phi)) / den3,
      -st * csf * (st * csf * sin(theta + phi) + 2 * sin(2 * phi)) / den3;

  MatrixX<Scalar> raw_lines(2, 5);
  raw_lines.row(0) << -csf * st, 1, 0, 0, 0;
  raw_lines.row(1) << 0, 0, st * st * csf * csf, -2 * st * csf, 1;

  ConeDescription<Scalar> cone;
  cone.n = n;
  cone.order = 2;
  cone.params = params;
  cone.tolerance = tol;
  cone.degenerate_angles = detail::angles_degenerate(params);
  cone.lines = detail::canonical_span_basis(raw_lines);

  const HyperplaneSet<Scalar> full = hyperplane_matrix<Scalar>(n, 2, params);
  MatrixX<Scalar> units = full.rows;
  for (Eigen::Index i = 0; i < units.rows(); ++i) units.row(i).normalize();

  std::vector<VectorX<Scalar>> canon;
  for (VectorX<Scalar> ray : {r1, r2, r3}) {
    for (Eigen::Index j = 0; j < cone.lines.rows(); ++j)
      ray -= ray.dot(cone.lines.row(j).transpose()) * cone.lines.row(j).transpose();
    const Scalar nrm = ray.norm();
    if (nrm < Scalar(1e-12))
      throw AnalyticDegenerate("closed-form cone: ray collapses into the line span");
    ray /= nrm;
    const VectorX<Scalar> prod = units * ray;
    if (prod.maxCoeff() > Scalar(1e-8)) {
      if (prod.minCoeff() < Scalar(-1e-8))
        throw AnalyticDegenerate("closed-form cone: ray orientation cannot be fixed");
      ray = -ray;
    }
    bool dup = false;
    for (const auto& seen : canon)
      if (seen.dot(ray) > Scalar(1) - Scalar(1e-10)) dup = true;
    if (!dup) canon.push_back(ray);
  }
  cone.rays.resize(static_cast<Eigen::Index>(canon.size()), 5);
  for (std::size_t i = 0; i < canon.size(); ++i) cone.rays.row(static_cast<Eigen::Index>(i)) = canon[i];
  detail::sort_rows_lexicographic(cone.rays);

  // irredundant rows for generic angles: the extreme d=1 rows plus the d=2 row
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.rows.rows(); ++i) {
    const auto& lab = full.labels[static_cast<std::size_t>(i)];
    for (const auto& bl : lab)
      if ((bl.d == 1 && (bl.k == 0 || bl.k == n - 1)) || bl.d == 2) {
        keep.push_back(i);
        break;
      }
  }
  cone.hyperplanes.rows.resize(static_cast<Eigen::Index>(keep.size()), 5);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    cone.hyperplanes.rows.row(static_cast<Eigen::Index>(i)) = full.rows.row(keep[i]);
    cone.hyperplanes.labels.push_back(full.labels[static_cast<std::size_t>(keep[i])]);
  }
  cone.hyperplanes.indeterminate.assign(keep.size(), 0);
  return cone;
}

// The three lines of the 9-coefficient cone, in the raw printed form (valid
// for every n; the caller checks kernel membership on demand).
template <typename Scalar>
MatrixX<Scalar> analytic_three_body_lines(const MeasurementParams<Scalar>& params) {
  using std::sin;
  if (std::abs(sin(params.phi)) < Scalar(1e-9))
    throw AnalyticDegenerate("three-body lines: sin(phi) vanishes");
  const Scalar q = sin(params.theta) / sin(params.phi);
  MatrixX<Scalar> l = MatrixX<Scalar>::Zero(3, 9);
  l(0, 0) = -q;
  l(0, 1) = 1;
  l(1, 2) = q * q;
  l(1, 3) = -2 * q;
  l(1, 4) = 1;
  l(2, 5) = -q * q * q;
  l(2, 6) = 3 * q * q;
  l(2, 7) = -3 * q;
  l(2, 8) = 1;
  return l;
}

// Explicit member of the 9-coefficient cone for any n >= 3 and sin(phi) != 0:
// a pure-phi combination whose leading weights are chosen large enough to
// dominate every k-dependent term, so all three band families stay <= 0.
template <typename Scalar>
BellCoefficients<Scalar> three_body_witness(int n, const MeasurementParams<Scalar>& params) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (n < 3) throw DomainError("three_body_witness: need n >= 3");
  const Scalar s = sin(params.phi), c = cos(params.phi);
  if (abs(s) < Scalar(1e-9))
    throw AnalyticDegenerate("three-body witness: sin(phi) vanishes");

  const Scalar a5 = s > 0 ? Scalar(-1) : Scalar(1);  // -sgn(sin^3 phi)
  const Scalar a2 = -(3 * (n - 2) * abs(c) + 1);
  // the d=1 band mixes a0 with bounded multiples of a2 and a5
  const Scalar q_max = Scalar((n - 1)) * Scalar((n - 2));
  const Scalar r_max = Scalar(n - 1) * Scalar(n - 1) / 4;
  const Scalar bound = 2 * abs(c) * (n - 1) * abs(a2) + 3 * (q_max * c * c + r_max * s * s) + 1;
  const Scalar a0 = (s > 0 ? Scalar(-1) : Scalar(1)) * bound;

  VectorX<Scalar> alpha = VectorX<Scalar>::Zero(9);
  alpha[0] = a0;
  alpha[2] = a2;
  alpha[5] = a5;
  return BellCoefficients<Scalar>(3, alpha);
}

}  // namespace stoqbell
