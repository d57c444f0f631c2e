#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>

#include "stoqbell/block_matrix.hpp"
#include "stoqbell/dicke.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// Local deterministic assignment: a parties answer (+,+) for (M_0, M_1),
// b answer (+,-), c answer (-,+), d answer (-,-).
struct DeterministicStrategy {
  long a = 0, b = 0, c = 0, d = 0;

  long n() const { return a + b + c + d; }

  void validate() const {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw ContractViolation("DeterministicStrategy: negative occupation");
    if (n() < 1) throw ContractViolation("DeterministicStrategy: empty strategy");
  }
};

// Correlator vector (order-matched to BellCoefficients) of a deterministic
// strategy; closed forms in the counts, no per-party enumeration.
template <typename Scalar = double>
VectorX<Scalar> strategy_correlators(const DeterministicStrategy& st, int order) {
  st.validate();
  const Scalar n = Scalar(st.n());
  const Scalar s0 = Scalar(st.a + st.b - st.c - st.d);
  const Scalar s1 = Scalar(st.a - st.b + st.c - st.d);
  const Scalar e = Scalar(st.a - st.b - st.c + st.d);
  VectorX<Scalar> corr(coefficient_count(order));
  corr[0] = s0;
  corr[1] = s1;
  if (order >= 2) {
    corr[2] = s0 * s0 - n;
    corr[3] = s0 * s1 - e;
    corr[4] = s1 * s1 - n;
  }
  if (order >= 3) {
    corr[5] = s0 * s0 * s0 + (2 - 3 * n) * s0;
    corr[6] = s0 * s0 * s1 + (2 - n) * s1 - 2 * e * s0;
    corr[7] = s0 * s1 * s1 + (2 - n) * s0 - 2 * e * s1;
    corr[8] = s1 * s1 * s1 + (2 - 3 * n) * s1;
  }
  return corr;
}

template <typename Scalar = double>
struct ClassicalBound {
  Scalar value = 0;
  DeterministicStrategy strategy;
};

// Minimum of the Bell form over deterministic strategies, scanning all
// compositions a+b+c+d = n. Ties resolve to the lexicographically smallest
// (a, b, c, d).
template <typename Scalar>
ClassicalBound<Scalar> beta_c(const BellCoefficients<Scalar>& coeffs, int n) {
  if (n < 1) throw DomainError("beta_c: n must be >= 1");
  ClassicalBound<Scalar> best;
  bool first = true;
  for (long a = 0; a <= n; ++a)
    for (long b = 0; a + b <= n; ++b)
      for (long c = 0; a + b + c <= n; ++c) {
        const DeterministicStrategy st{a, b, c, n - a - b - c};
        const Scalar v = coeffs.alpha.dot(strategy_correlators<Scalar>(st, coeffs.order));
        if (first || v < best.value) {
          first = false;
          best.value = v;
          best.strategy = st;
        }
      }
  return best;
}

template <typename Scalar = double>
struct GroundState {
  Scalar value = 0;
  VectorX<Scalar> vector;
};

namespace detail {

// Eigenvalue count below lambda by Sylvester inertia of the banded LDL^T.
template <typename Scalar>
int sturm_count(const SymmetricBlockMatrix<Scalar>& m, Scalar lambda) {
  const int bw = m.bandwidth();
  const Eigen::Index dim = m.dim;
  MatrixX<Scalar> w = MatrixX<Scalar>::Zero(bw + 1, dim);
  for (int d = 0; d <= bw; ++d)
    for (Eigen::Index k = 0; k + d < dim; ++k) w(d, k) = m.bands[d][k];
  w.row(0).array() -= lambda;
  int negatives = 0;
  const Scalar scale = w.cwiseAbs().maxCoeff() + Scalar(1);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Scalar pivot = w(0, j);
    if (pivot == Scalar(0)) pivot = Scalar(1e-300) * scale;
    if (pivot < Scalar(0)) ++negatives;
    const int reach = static_cast<int>(std::min<Eigen::Index>(bw, dim - 1 - j));
    for (int r = 1; r <= reach; ++r)
      for (int c = r; c <= reach; ++c)
        w(c - r, j + r) -= w(r, j) * w(c, j) / pivot;
  }
  return negatives;
}

// Solves (A - shift I) x = b through the banded LDL^T factors.
template <typename Scalar>
VectorX<Scalar> shifted_solve(const SymmetricBlockMatrix<Scalar>& m, Scalar shift,
                              VectorX<Scalar> b) {
  const int bw = m.bandwidth();
  const Eigen::Index dim = m.dim;
  MatrixX<Scalar> w = MatrixX<Scalar>::Zero(bw + 1, dim);
  for (int d = 0; d <= bw; ++d)
    for (Eigen::Index k = 0; k + d < dim; ++k) w(d, k) = m.bands[d][k];
  w.row(0).array() -= shift;
  const Scalar scale = w.cwiseAbs().maxCoeff() + Scalar(1);
  // factor in place: w(0,j) = D_j, w(r,j) = L_{j+r,j}
  for (Eigen::Index j = 0; j < dim; ++j) {
    Scalar pivot = w(0, j);
    if (std::abs(pivot) < Scalar(1e-14) * scale)
      pivot = (pivot < 0 ? Scalar(-1) : Scalar(1)) * Scalar(1e-14) * scale;
    w(0, j) = pivot;
    const int reach = static_cast<int>(std::min<Eigen::Index>(bw, dim - 1 - j));
    for (int r = 1; r <= reach; ++r) {
      const Scalar l = w(r, j) / pivot;
      for (int c = r; c <= reach; ++c) w(c - r, j + r) -= l * w(c, j);
      w(r, j) = l;
    }
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    const int reach = static_cast<int>(std::min<Eigen::Index>(bw, dim - 1 - j));
    for (int r = 1; r <= reach; ++r) b[j + r] -= w(r, j) * b[j];
  }
  for (Eigen::Index j = 0; j < dim; ++j) b[j] /= w(0, j);
  for (Eigen::Index j = dim - 1; j >= 0; --j) {
    const int reach = static_cast<int>(std::min<Eigen::Index>(bw, dim - 1 - j));
    for (int r = 1; r <= reach; ++r) b[j] -= w(r, j) * b[j + r];
  }
  return b;
}

template <typename Scalar>
void canonical_sign(VectorX<Scalar>& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < Scalar(0)) v = -v;
}

}  // namespace detail

inline constexpr Eigen::Index dense_eigensolver_limit = 2000;

// Smallest eigenvalue and eigenvector. Dense solve up to dim 2000; larger
// blocks use Sturm bisection plus inverse iteration on the bands.
// force_banded exists so tests can drive the large-dim path at small dims.
template <typename Scalar>
GroundState<Scalar> beta_q(const SymmetricBlockMatrix<Scalar>& m,
                           bool force_banded = false) {
  GroundState<Scalar> gs;
  if (m.dim <= dense_eigensolver_limit && !force_banded) {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m.dense());
    gs.value = es.eigenvalues()[0];
    gs.vector = es.eigenvectors().col(0);
    detail::canonical_sign(gs.vector);
    return gs;
  }
  // Gershgorin bracket
  Scalar lo = std::numeric_limits<Scalar>::max();
  Scalar hi = std::numeric_limits<Scalar>::lowest();
  for (Eigen::Index k = 0; k < m.dim; ++k) {
    Scalar radius = 0;
    for (int d = 1; d <= m.bandwidth(); ++d) {
      if (k + d < m.dim) radius += std::abs(m.bands[d][k]);
      if (k - d >= 0) radius += std::abs(m.bands[d][k - d]);
    }
    lo = std::min(lo, m.bands[0][k] - radius);
    hi = std::max(hi, m.bands[0][k] + radius);
  }
  const Scalar span = hi - lo + Scalar(1);
  Scalar a = lo, b = hi;
  while (b - a > Scalar(1e-9) * span + Scalar(1e-13) * (std::abs(a) + std::abs(b))) {
    const Scalar mid = (a + b) / 2;
    if (detail::sturm_count(m, mid) >= 1)
      b = mid;
    else
      a = mid;
  }
  gs.value = (a + b) / 2;
  VectorX<Scalar> v = VectorX<Scalar>::Constant(m.dim, Scalar(1));
  v.normalize();
  const Scalar shift = gs.value - Scalar(1e-10) * span;
  for (int it = 0; it < 6; ++it) {
    v = detail::shifted_solve(m, shift, v);
    v.normalize();
  }
  // one Rayleigh-quotient polish
  gs.value = v.dot(m.apply(v));
  gs.vector = v;
  detail::canonical_sign(gs.vector);
  return gs;
}

template <typename Scalar = double>
struct BoundsReport {
  Scalar beta_q = 0;
  Scalar beta_c = 0;
  std::optional<Scalar> gap;  // beta_q / beta_c, only when beta_c < 0
  DeterministicStrategy strategy;
  VectorX<Scalar> ground_state;
  int two_j = 0;  // block attaining beta_q
};

// Quantum bound on the symmetric block (default) or minimized over all
// total-spin blocks, classical bound, and their ratio.
template <typename Scalar>
BoundsReport<Scalar> gap(const BellCoefficients<Scalar>& coeffs,
                         const MeasurementParams<Scalar>& params, int n,
                         bool all_blocks = false) {
  BoundsReport<Scalar> rep;
  GroundState<Scalar> best;
  int best_two_j = n;
  bool first = true;
  for (int two_j = all_blocks ? n % 2 : n; two_j <= n; two_j += 2) {
    const auto gs = beta_q(build_block(coeffs, params, BlockSpec(n, two_j)));
    if (first || gs.value < best.value) {
      first = false;
      best = gs;
      best_two_j = two_j;
    }
  }
  rep.beta_q = best.value;
  rep.ground_state = best.vector;
  rep.two_j = best_two_j;
  const auto cb = beta_c(coeffs, n);
  rep.beta_c = cb.value;
  rep.strategy = cb.strategy;
  if (cb.value < Scalar(0)) rep.gap = rep.beta_q / rep.beta_c;
  return rep;
}

}  // namespace stoqbell
