#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <vector>

#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

template <typename Scalar>
struct NnlsResult {
  VectorX<Scalar> x;         // x >= 0 componentwise
  VectorX<Scalar> residual;  // b - A x
  Scalar residual_norm{};
  bool converged = true;     // false: iteration guard hit, treat as indeterminate
};

// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
// Sized for small dense problems (tens of columns); no sparsity assumptions.
template <typename Scalar>
NnlsResult<Scalar> nnls(const MatrixX<Scalar>& A, const VectorX<Scalar>& b,
                        Scalar dual_tol = Scalar(-1), long max_iter = -1) {
  if (A.rows() != b.size()) throw DomainError("nnls: row count of A must match b");
  const Eigen::Index m = A.cols();
  if (dual_tol < 0) {
    const Scalar scale = A.size() > 0 ? A.cwiseAbs().maxCoeff() : Scalar(0);
    dual_tol = Scalar(1e-12) * (1 + scale) *
               (1 + (b.size() > 0 ? b.template lpNorm<Eigen::Infinity>() : Scalar(0)));
  }
  if (max_iter < 0) max_iter = 20 * (m + 10);

  NnlsResult<Scalar> res;
  res.x = VectorX<Scalar>::Zero(m);
  std::vector<char> passive(static_cast<std::size_t>(m), 0);

  const auto solve_passive = [&](VectorX<Scalar>& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < m; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    MatrixX<Scalar> Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
    const VectorX<Scalar> zp = Ap.colPivHouseholderQr().solve(b);
    z.setZero(m);
    for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[static_cast<Eigen::Index>(c)];
  };

  long iter = 0;
  for (;;) {
    const VectorX<Scalar> w = A.transpose() * (b - A * res.x);
    Eigen::Index t = -1;
    Scalar best = dual_tol;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
        best = w[j];
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = 1;

    VectorX<Scalar> z(m);
    for (;;) {
      if (++iter > max_iter) {
        res.converged = false;
        res.residual = b - A * res.x;
        res.residual_norm = res.residual.norm();
        return res;
      }
      solve_passive(z);
      Scalar zmin = std::numeric_limits<Scalar>::max();
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)]) zmin = std::min(zmin, z[j]);
      if (zmin > 0) {
        res.x = z;
        break;
      }
      Scalar alpha = std::numeric_limits<Scalar>::max();
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0)
          alpha = std::min(alpha, res.x[j] / (res.x[j] - z[j]));
      res.x += alpha * (z - res.x);
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)] && res.x[j] <= dual_tol) {
          passive[static_cast<std::size_t>(j)] = 0;
          res.x[j] = 0;
        }
    }
  }

  res.residual = b - A * res.x;
  res.residual_norm = res.residual.norm();
  return res;
}

}  // namespace stoqbell
