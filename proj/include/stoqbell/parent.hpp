#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stoqbell/block_matrix.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/full_space.hpp"
#include "stoqbell/threads.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// State supported on the symmetric block, phi_k >= 0 and unit norm.
template <typename Scalar = double>
struct DickeState {
  int n = 0;
  VectorX<Scalar> amplitudes;  // indexed by excitation count k = 0..n

  DickeState(int n_, VectorX<Scalar> amps) : n(n_), amplitudes(std::move(amps)) {
    if (n < 1) throw DomainError("DickeState: n must be >= 1");
    if (amplitudes.size() != n + 1)
      throw ContractViolation("DickeState: expected n + 1 amplitudes");
    if (amplitudes.minCoeff() < Scalar(0))
      throw ContractViolation("DickeState: amplitudes must be nonnegative");
    if (std::abs(amplitudes.squaredNorm() - Scalar(1)) > Scalar(1e-12))
      throw ContractViolation("DickeState: amplitudes must have unit norm");
  }
};

using DickeStated = DickeState<double>;

template <typename Scalar = double>
DickeState<Scalar> ghz_state(int n) {
  if (n < 1) throw DomainError("ghz_state: n must be >= 1");
  VectorX<Scalar> amps = VectorX<Scalar>::Zero(n + 1);
  amps[0] = amps[n] = std::sqrt(Scalar(0.5));
  return DickeState<Scalar>(n, std::move(amps));
}

template <typename Scalar = double>
DickeState<Scalar> uniform_state(int n) {
  if (n < 1) throw DomainError("uniform_state: n must be >= 1");
  VectorX<Scalar> amps = VectorX<Scalar>::Constant(n + 1, Scalar(1) / std::sqrt(Scalar(n + 1)));
  return DickeState<Scalar>(n, std::move(amps));
}

template <typename Scalar = double>
DickeState<Scalar> basis_state(int n, int k) {
  if (n < 1) throw DomainError("basis_state: n must be >= 1");
  if (k < 0 || k > n) throw DomainError("basis_state: k out of [0, n]");
  VectorX<Scalar> amps = VectorX<Scalar>::Zero(n + 1);
  amps[k] = Scalar(1);
  return DickeState<Scalar>(n, std::move(amps));
}

// Clamps eigensolver-sized negative dust to zero and renormalizes; entries
// below -tol are a genuine sign violation and throw.
template <typename Scalar>
DickeState<Scalar> sanitize_state(int n, VectorX<Scalar> amplitudes,
                                  Scalar tol = Scalar(1e-9)) {
  if (amplitudes.minCoeff() < -tol)
    throw ContractViolation("sanitize_state: amplitudes are not nonnegative");
  amplitudes = amplitudes.cwiseMax(Scalar(0));
  const Scalar norm = amplitudes.norm();
  if (norm == Scalar(0)) throw ContractViolation("sanitize_state: zero vector");
  amplitudes /= norm;
  return DickeState<Scalar>(n, std::move(amplitudes));
}

template <typename Scalar = double>
struct GaussianProfile {
  Scalar mu = 0;
  Scalar sigma = 1;  // exponent is (k - mu)^2 / (4 sigma)
  int n = 0;
};

using GaussianProfiled = GaussianProfile<double>;

// Discrete Gaussian profile over excitation count, renormalized exactly.
// The largest exponent is subtracted before exponentiating so narrow
// profiles do not underflow to an all-zero vector.
template <typename Scalar>
DickeState<Scalar> gaussian_state(const GaussianProfile<Scalar>& profile) {
  if (profile.sigma <= Scalar(0)) throw DomainError("gaussian_state: sigma must be positive");
  if (profile.n < 1) throw DomainError("gaussian_state: n must be >= 1");
  VectorX<Scalar> expo(profile.n + 1);
  for (int k = 0; k <= profile.n; ++k) {
    const Scalar d = Scalar(k) - profile.mu;
    expo[k] = -d * d / (Scalar(4) * profile.sigma);
  }
  const Scalar top = expo.maxCoeff();
  VectorX<Scalar> amps = (expo.array() - top).exp().matrix();
  amps /= amps.norm();
  return DickeState<Scalar>(profile.n, std::move(amps));
}

// H = 1 - |phi><phi| on the symmetric block, stored with full bandwidth.
// Off-diagonals are -phi_k phi_l <= 0, so the result is stoquastic with
// tolerance 0, and phi itself is a ground state with eigenvalue 0.
template <typename Scalar>
SymmetricBlockMatrix<Scalar> parent_hamiltonian(const DickeState<Scalar>& state) {
  const auto& phi = state.amplitudes;
  if (phi.size() == 0 || phi.minCoeff() < Scalar(0))
    throw ContractViolation("parent_hamiltonian: negative amplitude");
  const Eigen::Index dim = phi.size();
  SymmetricBlockMatrix<Scalar> h(dim, static_cast<int>(dim) - 1);
  for (Eigen::Index d = 0; d < dim; ++d)
    for (Eigen::Index k = 0; k + d < dim; ++k)
      h.bands[d][k] = (d == 0 ? Scalar(1) : Scalar(0)) - phi[k] * phi[k + d];
  return h;
}

// One aggregated coefficient per letter-count class; w counts (X, Y, Z)
// letters and the class operator is the sum of every Pauli string with
// those counts.
template <typename Scalar = double>
struct PauliWeightTerm {
  std::array<int, 3> w{};
  Scalar coefficient = 0;

  int order() const { return w[0] + w[1] + w[2]; }
};

using PauliWeightTermd = PauliWeightTerm<double>;

namespace detail {

// Site letters packed two bits each: 0 = I, 1 = X, 2 = Y, 3 = Z. A string
// acts columnwise as P|b> = i^{#Y} (-1)^{popcount(b & phase_mask)} |b ^ flip_mask>.
struct PauliStringAction {
  unsigned long flip = 0;
  unsigned long phase = 0;
  int y_count = 0;
  std::array<int, 3> w{};
};

inline PauliStringAction decode_pauli_string(unsigned long s, int n) {
  PauliStringAction a;
  for (int j = 0; j < n; ++j) {
    const int letter = static_cast<int>((s >> (2 * j)) & 3UL);
    if (letter == 1 || letter == 2) a.flip |= 1UL << j;
    if (letter >= 2) a.phase |= 1UL << j;
    if (letter == 2) ++a.y_count;
    if (letter != 0) ++a.w[letter - 1];
  }
  return a;
}

template <typename Scalar>
void require_hermitian(const MatrixX<std::complex<Scalar>>& m, const char* who) {
  const Scalar scale = m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > Scalar(1e-10) * (Scalar(1) + scale))
    throw ContractViolation(std::string(who) + ": operator is not Hermitian");
}

}  // namespace detail

// Dense class operator T_w, the sum of all strings with letter counts w.
template <typename Scalar = double>
MatrixX<std::complex<Scalar>> pauli_class_sum_full(int n, const std::array<int, 3>& w) {
  detail::require_small_n(n, 8, "pauli_class_sum_full");
  if (w[0] < 0 || w[1] < 0 || w[2] < 0 || w[0] + w[1] + w[2] > n)
    throw DomainError("pauli_class_sum_full: letter counts out of range");
  using C = std::complex<Scalar>;
  const long dim = 1L << n;
  MatrixX<C> out = MatrixX<C>::Zero(dim, dim);
  const C phase_y[4] = {C(1), C(0, 1), C(-1), C(0, -1)};
  const long strings = 1L << (2 * n);
  for (long s = 0; s < strings; ++s) {
    const auto act = detail::decode_pauli_string(static_cast<unsigned long>(s), n);
    if (act.w != w) continue;
    const C py = phase_y[act.y_count & 3];
    for (long b = 0; b < dim; ++b) {
      const bool neg = std::popcount(static_cast<unsigned long>(b) & act.phase) & 1;
      out(static_cast<long>(b ^ static_cast<long>(act.flip)), b) += neg ? -py : py;
    }
  }
  return out;
}

// Coefficients c_s = Tr(A P_s) / 2^n for every string, checked constant on
// each letter-count class, then aggregated to one PauliWeightTerm per class.
// Terms with |coefficient| <= drop_tol are omitted; output is sorted by
// (order, w_X, w_Y).
template <typename Scalar>
std::vector<PauliWeightTerm<Scalar>> pauli_weight_decompose(
    const MatrixX<std::complex<Scalar>>& full, Scalar class_tol = Scalar(1e-10),
    Scalar drop_tol = Scalar(1e-11), int threads = -1) {
  const long dim = full.rows();
  if (dim < 2 || full.cols() != dim || (dim & (dim - 1)) != 0)
    throw DomainError("pauli_weight_decompose: dimension is not 2^n with n >= 1");
  const int n = std::countr_zero(static_cast<unsigned long>(dim));
  detail::require_small_n(n, 8, "pauli_weight_decompose");
  detail::require_hermitian(full, "pauli_weight_decompose");

  using C = std::complex<Scalar>;
  const C phase_y[4] = {C(1), C(0, 1), C(-1), C(0, -1)};
  const long strings = 1L << (2 * n);
  std::vector<Scalar> coeff(static_cast<std::size_t>(strings));
  parallel_for(strings, resolve_threads(threads), [&](long s) {
    const auto act = detail::decode_pauli_string(static_cast<unsigned long>(s), n);
    C sum(0);
    for (long b = 0; b < dim; ++b) {
      const bool neg = std::popcount(static_cast<unsigned long>(b) & act.phase) & 1;
      const C v = full(b, static_cast<long>(b ^ static_cast<long>(act.flip)));
      sum += neg ? -v : v;
    }
    coeff[static_cast<std::size_t>(s)] =
        (phase_y[act.y_count & 3] * sum).real() / Scalar(dim);
  });

  struct ClassAccum {
    Scalar lo = 0, hi = 0, sum = 0;
    long count = 0;
  };
  std::map<std::array<int, 3>, ClassAccum> classes;
  for (long s = 0; s < strings; ++s) {
    const auto act = detail::decode_pauli_string(static_cast<unsigned long>(s), n);
    const Scalar c = coeff[static_cast<std::size_t>(s)];
    auto& acc = classes[act.w];
    if (acc.count == 0) {
      acc.lo = acc.hi = c;
    } else {
      acc.lo = std::min(acc.lo, c);
      acc.hi = std::max(acc.hi, c);
    }
    acc.sum += c;
    ++acc.count;
  }

  std::vector<PauliWeightTerm<Scalar>> terms;
  for (const auto& [w, acc] : classes) {
    if (acc.hi - acc.lo > class_tol)
      throw NotPermutationInvariant(
          "pauli_weight_decompose: coefficients spread " + std::to_string(acc.hi - acc.lo) +
          " on class (" + std::to_string(w[0]) + "," + std::to_string(w[1]) + "," +
          std::to_string(w[2]) + ")");
    const Scalar mean = acc.sum / Scalar(acc.count);
    if (std::abs(mean) > drop_tol) terms.push_back({w, mean});
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.w < b.w;
  });
  return terms;
}

template <typename Scalar>
std::vector<PauliWeightTerm<Scalar>> pauli_weight_decompose(
    const MatrixX<Scalar>& full, Scalar class_tol = Scalar(1e-10),
    Scalar drop_tol = Scalar(1e-11), int threads = -1) {
  const MatrixX<std::complex<Scalar>> promoted = full.template cast<std::complex<Scalar>>();
  return pauli_weight_decompose<Scalar>(promoted, class_tol, drop_tol, threads);
}

// Lift of a symmetric-block operator to the full space, sum_kl m_kl |D_k><D_l|.
template <typename Scalar>
MatrixX<Scalar> dicke_lift(const SymmetricBlockMatrix<Scalar>& block, int n) {
  detail::require_small_n(n, 8, "dicke_lift");
  if (block.dim != n + 1)
    throw ContractViolation("dicke_lift: block is not the symmetric block of n parties");
  const long dim = 1L << n;
  MatrixX<Scalar> d(n + 1, dim);
  for (int k = 0; k <= n; ++k) d.row(k) = dicke_vector<Scalar>(n, k).transpose();
  return d.transpose() * block.dense() * d;
}

template <typename Scalar>
std::vector<PauliWeightTerm<Scalar>> pauli_weight_decompose(
    const SymmetricBlockMatrix<Scalar>& block, int n, Scalar class_tol = Scalar(1e-10),
    Scalar drop_tol = Scalar(1e-11), int threads = -1) {
  return pauli_weight_decompose<Scalar>(dicke_lift(block, n), class_tol, drop_tol, threads);
}

// Largest class order carrying a coefficient above coeff_tol; 0 when none does.
template <typename Scalar>
int max_order(const std::vector<PauliWeightTerm<Scalar>>& terms,
              Scalar coeff_tol = Scalar(1e-10)) {
  int best = 0;
  for (const auto& t : terms)
    if (std::abs(t.coefficient) > coeff_tol) best = std::max(best, t.order());
  return best;
}

}  // namespace stoqbell
