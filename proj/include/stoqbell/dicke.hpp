#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <string_view>

#include "stoqbell/block_matrix.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// Ladder factor between neighbouring Dicke states, Gamma(x) = sqrt((x+1)(2J-x)).
template <typename Scalar = double>
Scalar gamma(int x, int two_j) {
  if (x < 0 || x > two_j - 1) throw DomainError("gamma: x out of [0, 2J-1]");
  return std::sqrt(Scalar(x + 1) * Scalar(two_j - x));
}

// Diagonal factor Xi(x) = 2J - 2x.
template <typename Scalar = double>
Scalar xi(int x, int two_j) {
  if (x < 0 || x > two_j) throw DomainError("xi: x out of [0, 2J]");
  return Scalar(two_j - 2 * x);
}

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

namespace detail {

// Gamma extended by zero outside [0, 2J-1]; the closed-form elements below
// only ever step one past the boundary, where the physical factor vanishes.
template <typename Scalar>
Scalar gam(long x, int two_j) {
  if (x < 0 || x > two_j - 1) return Scalar(0);
  return std::sqrt(Scalar(x + 1) * Scalar(two_j - x));
}

template <typename Scalar>
Scalar xiu(long x, int two_j) {
  return Scalar(two_j) - Scalar(2) * Scalar(x);
}

}  // namespace detail

// Matrix element <D^k| P_1 P_2 ... |D^l> of a product of collective
// single-body PI Pauli operators restricted to a spin-J block (dim 2J+1).
// Supported factor sequences: X, Y, Z; XX, YY, XY, YX, XZ, ZX, YZ, ZY, ZZ;
// ZZZ, ZZX, ZXX, XXX, XZZ, YZZ, YZX, ZYX, YXX.
template <typename Scalar = double>
std::complex<Scalar> pi_pauli_product_element(std::span<const Pauli> factors,
                                              int two_j, Eigen::Index k,
                                              Eigen::Index l) {
  using C = std::complex<Scalar>;
  if (two_j < 0) throw DomainError("pi_pauli_product_element: 2J must be >= 0");
  if (k < 0 || k > two_j || l < 0 || l > two_j)
    throw DomainError("pi_pauli_product_element: indices out of [0, 2J]");
  std::string key;
  for (Pauli p : factors) key.push_back(static_cast<char>(p));

  const auto G = [two_j](long x) { return detail::gam<Scalar>(x, two_j); };
  const auto Xi = [two_j](long x) { return detail::xiu<Scalar>(x, two_j); };
  const C i(0, 1);
  const Scalar zero(0);

  if (key == "X")
    return C(k == l + 1 ? G(l) : (l == k + 1 ? G(k) : zero));
  if (key == "Y")
    return k == l + 1 ? i * G(l) : (l == k + 1 ? -i * G(k) : C(zero));
  if (key == "Z") return C(k == l ? Xi(k) : zero);

  if (key == "XX" || key == "YY") {
    const Scalar sgn = key == "YY" ? Scalar(-1) : Scalar(1);
    if (k == l + 2) return C(sgn * G(l + 1) * G(l));
    if (l == k + 2) return C(sgn * G(k + 1) * G(k));
    if (k == l) return C(G(l) * G(l) + G(l - 1) * G(l - 1));
    return C(zero);
  }
  if (key == "XY" || key == "YX") {
    if (k == l + 2) return i * G(l + 1) * G(l);
    if (l == k + 2) return -i * G(k + 1) * G(k);
    if (k == l) {
      const Scalar d = G(l) * G(l) - G(l - 1) * G(l - 1);
      return i * (key == "XY" ? d : -d);
    }
    return C(zero);
  }
  if (key == "XZ")
    return C(k == l + 1 ? Xi(l) * G(l) : (l == k + 1 ? Xi(l) * G(k) : zero));
  if (key == "ZX")
    return C(k == l + 1 ? Xi(k) * G(l) : (l == k + 1 ? Xi(k) * G(k) : zero));
  if (key == "YZ")
    return k == l + 1 ? i * Xi(l) * G(l)
                      : (l == k + 1 ? -i * Xi(l) * G(k) : C(zero));
  if (key == "ZY")
    return k == l + 1 ? i * Xi(k) * G(l)
                      : (l == k + 1 ? -i * Xi(k) * G(k) : C(zero));
  if (key == "ZZ") return C(k == l ? Xi(k) * Xi(k) : zero);

  if (key == "ZZZ") return C(k == l ? Xi(k) * Xi(k) * Xi(k) : zero);
  if (key == "ZZX")
    return C(k == l + 1 ? Xi(k) * Xi(k) * G(l)
                        : (l == k + 1 ? Xi(k) * Xi(k) * G(k) : zero));
  if (key == "ZXX") {
    if (k == l + 2) return C(Xi(k) * G(l + 1) * G(l));
    if (l == k + 2) return C(Xi(k) * G(k + 1) * G(k));
    if (k == l) return C(Xi(k) * (G(l) * G(l) + G(l - 1) * G(l - 1)));
    return C(zero);
  }
  if (key == "XXX") {
    if (k == l + 3) return C(G(l + 2) * G(l + 1) * G(l));
    if (l == k + 3) return C(G(k + 2) * G(k + 1) * G(k));
    if (k == l + 1)
      return C(G(l + 1) * G(l + 1) * G(l) + G(l) * G(l) * G(l) +
               G(l) * G(l - 1) * G(l - 1));
    if (l == k + 1)
      return C(G(k + 1) * G(k + 1) * G(k) + G(k) * G(k) * G(k) +
               G(k) * G(k - 1) * G(k - 1));
    return C(zero);
  }
  if (key == "XZZ")
    return C(k == l + 1 ? Xi(l) * Xi(l) * G(l)
                        : (l == k + 1 ? Xi(l) * Xi(l) * G(k) : zero));
  if (key == "YZZ")
    return k == l + 1 ? i * Xi(l) * Xi(l) * G(l)
                      : (l == k + 1 ? -i * Xi(l) * Xi(l) * G(k) : C(zero));
  if (key == "YZX") {
    if (k == l + 2) return i * Xi(l + 1) * G(l + 1) * G(l);
    if (l == k + 2) return -i * Xi(k + 1) * G(k + 1) * G(k);
    if (k == l)
      return i * (Xi(l - 1) * G(l - 1) * G(l - 1) - Xi(l + 1) * G(l) * G(l));
    return C(zero);
  }
  if (key == "ZYX") {
    if (k == l + 2) return i * Xi(k) * G(l + 1) * G(l);
    if (l == k + 2) return -i * Xi(k) * G(k + 1) * G(k);
    if (k == l) return i * Xi(k) * (G(l - 1) * G(l - 1) - G(l) * G(l));
    return C(zero);
  }
  if (key == "YXX") {
    if (k == l + 3) return i * G(l + 2) * G(l + 1) * G(l);
    if (l == k + 3) return -i * G(k + 2) * G(k + 1) * G(k);
    if (k == l + 1)
      return i * (G(l) * G(l) * G(l) - G(l + 1) * G(l + 1) * G(l) +
                  G(l) * G(l - 1) * G(l - 1));
    if (l == k + 1)
      return -i * (G(k) * G(k) * G(k) + G(k + 1) * G(k + 1) * G(k) -
                   G(k) * G(k - 1) * G(k - 1));
    return C(zero);
  }
  throw UnsupportedOperator("pi_pauli_product_element: unsupported sequence " + key);
}

template <typename Scalar = double>
std::complex<Scalar> pi_pauli_product_element(std::initializer_list<Pauli> factors,
                                              int two_j, Eigen::Index k,
                                              Eigen::Index l) {
  return pi_pauli_product_element<Scalar>(std::span<const Pauli>(factors.begin(), factors.size()),
                                          two_j, k, l);
}

namespace detail {

inline int setting_order(std::string_view setting) {
  static constexpr std::array<std::string_view, 9> canonical = {
      "0", "1", "00", "01", "11", "000", "001", "011", "111"};
  for (const auto s : canonical)
    if (s == setting) return static_cast<int>(s.size());
  throw UnsupportedOperator("unknown measurement setting string: " +
                            std::string(setting));
}

// Weights of S_<setting> on the collective Pauli words, grouped by the
// number of X letters. weights[j] multiplies the word with j X's (the sum
// over letter positions is already folded in).
template <typename Scalar>
std::array<Scalar, 4> setting_weights(std::string_view setting,
                                      const MeasurementParams<Scalar>& params) {
  std::array<Scalar, 4> w{0, 0, 0, 0};
  const int order = setting_order(setting);
  std::array<Scalar, 3> s{}, c{};
  for (int j = 0; j < order; ++j) {
    const Scalar a = setting[j] == '0' ? params.phi : params.theta;
    s[j] = std::sin(a);
    c[j] = std::cos(a);
  }
  if (order == 1) {
    w[0] = c[0];
    w[1] = s[0];
  } else if (order == 2) {
    w[0] = c[0] * c[1];
    w[1] = c[0] * s[1] + s[0] * c[1];
    w[2] = s[0] * s[1];
  } else {
    w[0] = c[0] * c[1] * c[2];
    w[1] = c[0] * c[1] * s[2] + c[0] * s[1] * c[2] + s[0] * c[1] * c[2];
    w[2] = c[0] * s[1] * s[2] + s[0] * c[1] * s[2] + s[0] * s[1] * c[2];
    w[3] = s[0] * s[1] * s[2];
  }
  return w;
}

}  // namespace detail

// Band d of the K-body PI measurement operator S_<setting> on the given
// block, with 2J substituted throughout. Returns the zero band when
// d exceeds the operator order.
template <typename Scalar = double>
VectorX<Scalar> pi_measurement_band(std::string_view setting,
                                    const MeasurementParams<Scalar>& params,
                                    const BlockSpec& block, int d) {
  const int dim = block.dim();
  if (d < 0 || d > dim - 1)
    throw DomainError("pi_measurement_band: band offset out of range");
  const int order = detail::setting_order(setting);
  VectorX<Scalar> band = VectorX<Scalar>::Zero(dim - d);
  if (d > order) return band;

  const int N = block.two_j;
  const auto w = detail::setting_weights(setting, params);
  const auto G = [N](long x) { return detail::gam<Scalar>(x, N); };
  const auto Xi = [N](long x) { return detail::xiu<Scalar>(x, N); };

  if (order == 1) {
    for (int k = 0; k + d < dim; ++k)
      band[k] = d == 0 ? w[0] * Xi(k) : w[1] * G(k);
    return band;
  }
  if (order == 2) {
    for (int k = 0; k + d < dim; ++k) {
      if (d == 0) {
        const Scalar dzz = Xi(k) * Xi(k) - N;
        const Scalar dxx = G(k) * G(k) + G(k - 1) * G(k - 1) - N;
        band[k] = w[0] * dzz + w[2] * dxx;
      } else if (d == 1) {
        band[k] = w[1] * G(k) * Scalar(N - 1 - 2 * k);
      } else {
        band[k] = w[2] * G(k) * G(k + 1);
      }
    }
    return band;
  }
  for (int k = 0; k + d < dim; ++k) {
    if (d == 0) {
      const Scalar gg = G(k) * G(k) + G(k - 1) * G(k - 1);
      const Scalar dzzz = Xi(k) * Xi(k) * Xi(k) + Scalar(2 - 3 * N) * Xi(k);
      const Scalar dzxx = Xi(k) * gg + Scalar(2 - N) * Xi(k) +
                          Scalar(2) * (G(k - 1) * G(k - 1) - G(k) * G(k));
      band[k] = w[0] * dzzz + w[2] * dzxx;
    } else if (d == 1) {
      const Scalar q = Scalar(4 * k * k - 4 * k * (N - 1) + N * N - 3 * N + 2);
      const Scalar r = Scalar(k) * Scalar(N - 1 - k);
      band[k] = G(k) * (q * w[1] + Scalar(3) * r * w[3]);
    } else if (d == 2) {
      band[k] = G(k) * G(k + 1) * Scalar(N - 2 - 2 * k) * w[2];
    } else {
      band[k] = G(k) * G(k + 1) * G(k + 2) * w[3];
    }
  }
  return band;
}

inline std::span<const std::string_view> settings_for_order(int order) {
  static constexpr std::array<std::string_view, 9> all = {
      "0", "1", "00", "01", "11", "000", "001", "011", "111"};
  return std::span<const std::string_view>(all.data(), coefficient_count(order));
}

// Block of the Bell operator B = sum_i alpha_i S_i. Entries depend on the
// block only through 2J (sub-maximal blocks reuse the symmetric-block
// algebra at the reduced size).
template <typename Scalar>
SymmetricBlockMatrix<Scalar> build_block(const BellCoefficients<Scalar>& coeffs,
                                         const MeasurementParams<Scalar>& params,
                                         const BlockSpec& block) {
  const int dim = block.dim();
  const int bw = std::min(coeffs.order, dim - 1);
  SymmetricBlockMatrix<Scalar> m(dim, bw);
  const auto settings = settings_for_order(coeffs.order);
  for (int d = 0; d <= bw; ++d) {
    for (Eigen::Index i = 0; i < coeffs.alpha.size(); ++i) {
      if (coeffs.alpha[i] == Scalar(0)) continue;
      m.bands[d] += coeffs.alpha[i] * pi_measurement_band(settings[i], params, block, d);
    }
  }
  return m;
}

}  // namespace stoqbell
