#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "stoqbell/errors.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// Real symmetric matrix stored by diagonals. bands[d] holds the entries
// (k, k+d) for k = 0..dim-1-d; bands[0] is the main diagonal.
template <typename Scalar = double>
struct SymmetricBlockMatrix {
  Eigen::Index dim = 0;
  std::vector<VectorX<Scalar>> bands;

  SymmetricBlockMatrix() = default;
  SymmetricBlockMatrix(Eigen::Index dim_, int bandwidth) : dim(dim_) {
    if (dim < 1) throw DomainError("SymmetricBlockMatrix: dim must be >= 1");
    if (bandwidth < 0 || bandwidth > dim - 1)
      throw DomainError("SymmetricBlockMatrix: bandwidth out of range");
    bands.reserve(bandwidth + 1);
    for (int d = 0; d <= bandwidth; ++d)
      bands.push_back(VectorX<Scalar>::Zero(dim - d));
  }

  int bandwidth() const { return static_cast<int>(bands.size()) - 1; }

  Scalar operator()(Eigen::Index k, Eigen::Index l) const {
    const Eigen::Index d = k < l ? l - k : k - l;
    if (d > bandwidth()) return Scalar(0);
    return bands[d][k < l ? k : l];
  }

  MatrixX<Scalar> dense() const {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(dim, dim);
    for (int d = 0; d <= bandwidth(); ++d)
      for (Eigen::Index k = 0; k + d < dim; ++k)
        m(k, k + d) = m(k + d, k) = bands[d][k];
    return m;
  }

  // y = M x without densifying.
  VectorX<Scalar> apply(const VectorX<Scalar>& x) const {
    VectorX<Scalar> y = VectorX<Scalar>::Zero(dim);
    for (Eigen::Index k = 0; k < dim; ++k) y[k] = bands[0][k] * x[k];
    for (int d = 1; d <= bandwidth(); ++d)
      for (Eigen::Index k = 0; k + d < dim; ++k) {
        y[k] += bands[d][k] * x[k + d];
        y[k + d] += bands[d][k] * x[k];
      }
    return y;
  }
};

using SymmetricBlockMatrixd = SymmetricBlockMatrix<double>;

// Verdict of the off-diagonal sign scan. worst holds the most positive
// off-diagonal entry found (its band d >= 1, index k, and value); for a
// 1x1 block there is no off-diagonal and worst stays (0, 0, 0).
template <typename Scalar = double>
struct StoqReport {
  bool stoquastic = true;
  int worst_d = 0;
  Eigen::Index worst_k = 0;
  Scalar worst_value = 0;
  Scalar tolerance = 0;
};

using StoqReportd = StoqReport<double>;

// Stoquastic in the fixed basis: every off-diagonal entry <= tol.
template <typename Scalar>
StoqReport<Scalar> check_stoquastic(const SymmetricBlockMatrix<Scalar>& m,
                                    Scalar tol = Scalar(1e-10)) {
  StoqReport<Scalar> report;
  report.tolerance = tol;
  bool found = false;
  for (int d = 1; d <= m.bandwidth(); ++d)
    for (Eigen::Index k = 0; k + d < m.dim; ++k) {
      const Scalar v = m.bands[d][k];
      if (!found || v > report.worst_value) {
        found = true;
        report.worst_d = d;
        report.worst_k = k;
        report.worst_value = v;
      }
    }
  report.stoquastic = !found || report.worst_value <= tol;
  return report;
}

}  // namespace stoqbell
