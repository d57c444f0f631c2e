#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <bit>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "stoqbell/block_matrix.hpp"
#include "stoqbell/dicke.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

// Exhaustive full-space (2^n) constructions. Deliberately simple sums over
// ordered site tuples: this is the reference the banded closed forms are
// tested against, so it must not share code with them.

namespace stoqbell {

namespace detail {

inline void require_small_n(int n, int limit, const char* who) {
  if (n < 1 || n > limit)
    throw DomainError(std::string(who) + ": n out of range for full-space work");
}

// v <- (M acting on `site`) v, bit `site` = 0 means spin up (Z eigenvalue +1).
template <typename Mat, typename Vec>
void apply_site_inplace(Vec& v, int n, int site, const Mat& m) {
  const long dim = 1L << n;
  const long bit = 1L << site;
  for (long b = 0; b < dim; ++b) {
    if (b & bit) continue;
    const auto v0 = v[b];
    const auto v1 = v[b | bit];
    v[b] = m(0, 0) * v0 + m(0, 1) * v1;
    v[b | bit] = m(1, 0) * v0 + m(1, 1) * v1;
  }
}

// Accumulates sum over ordered tuples of distinct sites of the product of
// per-position local operators, applied to v.
template <typename Mat, typename Vec>
Vec distinct_tuple_apply(const Vec& v, int n, const std::vector<Mat>& locals) {
  const int K = static_cast<int>(locals.size());
  Vec out = Vec::Zero(v.size());
  std::vector<int> sites(K);
  const auto recurse = [&](auto&& self, int pos, const Vec& cur) -> void {
    if (pos == K) {
      out += cur;
      return;
    }
    for (int s = 0; s < n; ++s) {
      bool used = false;
      for (int j = 0; j < pos; ++j) used = used || sites[j] == s;
      if (used) continue;
      sites[pos] = s;
      Vec next = cur;
      apply_site_inplace(next, n, s, locals[pos]);
      self(self, pos + 1, next);
    }
  };
  recurse(recurse, 0, v);
  return out;
}

}  // namespace detail

// Normalized Dicke state |D^k> in the computational basis; k counts 1-bits.
template <typename Scalar = double>
VectorX<Scalar> dicke_vector(int n, int k) {
  detail::require_small_n(n, 24, "dicke_vector");
  if (k < 0 || k > n) throw DomainError("dicke_vector: k out of [0, n]");
  const long dim = 1L << n;
  VectorX<Scalar> v = VectorX<Scalar>::Zero(dim);
  long count = 0;
  for (long b = 0; b < dim; ++b)
    if (std::popcount(static_cast<unsigned long>(b)) == k) {
      v[b] = Scalar(1);
      ++count;
    }
  return v / std::sqrt(Scalar(count));
}

// S_<setting> v by the defining sum over ordered distinct site tuples.
template <typename Scalar>
VectorX<Scalar> apply_measurement_full(const VectorX<Scalar>& v, int n,
                                       std::string_view setting,
                                       const MeasurementParams<Scalar>& params) {
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  std::vector<Mat2> locals;
  for (char ch : setting) {
    const Scalar a = ch == '0' ? params.phi : params.theta;
    Mat2 m;
    m << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
    locals.push_back(m);
  }
  return detail::distinct_tuple_apply(v, n, locals);
}

template <typename Scalar>
VectorX<Scalar> apply_bell_full(const VectorX<Scalar>& v, int n,
                                const BellCoefficients<Scalar>& coeffs,
                                const MeasurementParams<Scalar>& params) {
  VectorX<Scalar> out = VectorX<Scalar>::Zero(v.size());
  const auto settings = settings_for_order(coeffs.order);
  for (Eigen::Index i = 0; i < coeffs.alpha.size(); ++i) {
    if (coeffs.alpha[i] == Scalar(0)) continue;
    out += coeffs.alpha[i] * apply_measurement_full(v, n, settings[i], params);
  }
  return out;
}

// Dense 2^n x 2^n Bell operator.
template <typename Scalar>
MatrixX<Scalar> bell_operator_full(const BellCoefficients<Scalar>& coeffs,
                                   const MeasurementParams<Scalar>& params, int n) {
  detail::require_small_n(n, 12, "bell_operator_full");
  const long dim = 1L << n;
  MatrixX<Scalar> b(dim, dim);
  VectorX<Scalar> e = VectorX<Scalar>::Zero(dim);
  for (long col = 0; col < dim; ++col) {
    e[col] = Scalar(1);
    b.col(col) = apply_bell_full(e, n, coeffs, params);
    e[col] = Scalar(0);
  }
  return b;
}

// Symmetric-block entries <D^k|B|D^l> straight from the full space.
// The oracle build_block is measured against.
template <typename Scalar>
MatrixX<Scalar> brute_force_block(const BellCoefficients<Scalar>& coeffs,
                                  const MeasurementParams<Scalar>& params, int n) {
  detail::require_small_n(n, 8, "brute_force_block");
  const long dim = 1L << n;
  MatrixX<Scalar> d(n + 1, dim);
  for (int k = 0; k <= n; ++k) d.row(k) = dicke_vector<Scalar>(n, k).transpose();
  MatrixX<Scalar> bd(dim, n + 1);
  for (int l = 0; l <= n; ++l)
    bd.col(l) = apply_bell_full(VectorX<Scalar>(d.row(l).transpose()), n, coeffs, params);
  return d * bd;
}

template <typename Scalar = double>
struct EmbedResult {
  Eigen::SparseMatrix<Scalar> op;  // 2^n x 2^n
  Scalar shift = 0;                // coefficient c on the symmetric projector
  StoqReport<Scalar> report;       // worst_d = weight distance, worst_k = lower weight
};

// Extends a Dicke-basis block by zero off the symmetric subspace and adds
// c * Pi_sym. With c <= -(max diagonal), Dicke-basis stoquasticity carries
// over to the computational basis; default c = -(max diagonal) - 1.
template <typename Scalar>
EmbedResult<Scalar> embed_computational(const SymmetricBlockMatrix<Scalar>& block,
                                        int n, std::optional<Scalar> shift = {},
                                        Scalar tol = Scalar(1e-10)) {
  detail::require_small_n(n, 8, "embed_computational");
  if (block.dim != n + 1)
    throw ContractViolation("embed_computational: block is not the symmetric block of n parties");
  const Scalar c = shift ? *shift : -block.bands[0].maxCoeff() - Scalar(1);

  std::vector<double> log_binom(n + 1);
  for (int k = 0; k <= n; ++k)
    log_binom[k] = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  const auto amp = [&](int k) { return std::exp(-0.5 * log_binom[k]); };

  const long dim = 1L << n;
  std::vector<std::vector<long>> by_weight(n + 1);
  for (long b = 0; b < dim; ++b)
    by_weight[std::popcount(static_cast<unsigned long>(b))].push_back(b);

  std::vector<Eigen::Triplet<Scalar>> trip;
  EmbedResult<Scalar> res;
  res.shift = c;
  res.report.tolerance = tol;
  bool found = false;
  const auto offer = [&](int dist, int kmin, Scalar v) {
    if (!found || v > res.report.worst_value) {
      found = true;
      res.report.worst_d = dist;
      res.report.worst_k = kmin;
      res.report.worst_value = v;
    }
  };
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      const int dist = std::abs(k - l);
      if (dist > block.bandwidth() && k != l) continue;
      Scalar m = block(k, l);
      if (k == l) m += c;
      const Scalar v = m * amp(k) * amp(l);
      if (v == Scalar(0)) continue;
      for (long s : by_weight[k])
        for (long t : by_weight[l]) trip.emplace_back(s, t, v);
      if (k != l)
        offer(dist, std::min(k, l), v);
      else if (by_weight[k].size() > 1)
        offer(0, k, v);
    }
  }
  res.report.stoquastic = !found || res.report.worst_value <= tol;
  res.op.resize(dim, dim);
  res.op.setFromTriplets(trip.begin(), trip.end());
  return res;
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 2> pauli_matrix(Pauli p) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 2, 2> m;
  switch (p) {
    case Pauli::X: m << C(0), C(1), C(1), C(0); break;
    case Pauli::Y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case Pauli::Z: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

// Sum over ordered tuples of distinct sites of products of the given
// Pauli letters, as a dense 2^n matrix.
template <typename Scalar = double>
MatrixX<std::complex<Scalar>> pauli_tuple_sum_full(int n, std::span<const Pauli> letters) {
  detail::require_small_n(n, 10, "pauli_tuple_sum_full");
  using C = std::complex<Scalar>;
  using Mat2 = Eigen::Matrix<C, 2, 2>;
  std::vector<Mat2> locals;
  for (Pauli p : letters) locals.push_back(pauli_matrix<Scalar>(p));
  const long dim = 1L << n;
  MatrixX<C> out(dim, dim);
  VectorX<C> e = VectorX<C>::Zero(dim);
  for (long col = 0; col < dim; ++col) {
    e[col] = C(1);
    out.col(col) = detail::distinct_tuple_apply(e, n, locals);
    e[col] = C(0);
  }
  return out;
}

// Sum over sites of the single-site product P_1 P_2 ... applied at that site.
template <typename Scalar = double>
MatrixX<std::complex<Scalar>> pauli_same_site_full(int n, std::span<const Pauli> letters) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 2, 2> prod = Eigen::Matrix<C, 2, 2>::Identity();
  for (Pauli p : letters) prod = prod * pauli_matrix<Scalar>(p);
  std::vector<Eigen::Matrix<C, 2, 2>> locals{prod};
  const long dim = 1L << n;
  MatrixX<C> out(dim, dim);
  VectorX<C> e = VectorX<C>::Zero(dim);
  for (long col = 0; col < dim; ++col) {
    e[col] = C(1);
    out.col(col) = detail::distinct_tuple_apply(e, n, locals);
    e[col] = C(0);
  }
  return out;
}

// Largest sorted-spectrum deviation of the full-space operator under a
// common rotation of both measurement angles.
template <typename Scalar>
Scalar spectrum_shift_check(const BellCoefficients<Scalar>& coeffs,
                            const MeasurementParams<Scalar>& params, int n,
                            Scalar delta) {
  detail::require_small_n(n, 7, "spectrum_shift_check");
  const MeasurementParams<Scalar> shifted(params.phi + delta, params.theta + delta);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> a(
      bell_operator_full(coeffs, params, n), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> b(
      bell_operator_full(coeffs, shifted, n), Eigen::EigenvaluesOnly);
  return (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff();
}

}  // namespace stoqbell
