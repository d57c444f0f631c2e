#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stoqbell/dicke.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/nnls.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

struct BandLabel {
  int d;  // off-diagonal offset of the originating band
  int k;  // band row index
};

// H-representation of the stoquasticity cone {alpha : rows * alpha <= 0}.
// Rows are band entries with the positive Gamma prefactors divided out, so the
// sign constraints are unchanged; rows that coincide up to positive scale are
// collapsed with their labels merged.
template <typename Scalar>
struct HyperplaneSet {
  MatrixX<Scalar> rows;
  std::vector<std::vector<BandLabel>> labels;
  bool prefactor_stripped = true;
  // parallel to rows after reduce_irredundant: kept but certification residual
  // fell inside the ambiguity band
  std::vector<char> indeterminate;
};

using HyperplaneSetd = HyperplaneSet<double>;

namespace detail {

template <typename Scalar>
struct RowSpaceSplit {
  MatrixX<Scalar> normalized;  // unit rows
  MatrixX<Scalar> range;       // dim x rank, orthonormal columns
  MatrixX<Scalar> kernel;      // dim x (dim - rank), orthonormal columns
  Eigen::Index rank = 0;
};

template <typename Scalar>
RowSpaceSplit<Scalar> split_row_space(const MatrixX<Scalar>& rows, Scalar rank_tol) {
  RowSpaceSplit<Scalar> out;
  const Eigen::Index dim = rows.cols();
  out.normalized = rows;
  for (Eigen::Index i = 0; i < out.normalized.rows(); ++i) {
    const Scalar nrm = out.normalized.row(i).norm();
    if (nrm > Scalar(1e-300)) out.normalized.row(i) /= nrm;
  }
  if (rows.rows() == 0) {
    out.range = MatrixX<Scalar>(dim, 0);
    out.kernel = MatrixX<Scalar>::Identity(dim, dim);
    return out;
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(out.normalized, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar smax = sv.size() > 0 ? sv[0] : Scalar(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol * smax) ++out.rank;
  out.range = svd.matrixV().leftCols(out.rank);
  out.kernel = svd.matrixV().rightCols(dim - out.rank);
  return out;
}

// Deterministic orthonormal basis of the span of the input rows: reduced
// echelon form, Gram-Schmidt top-down, first significant component positive.
template <typename Scalar>
MatrixX<Scalar> canonical_span_basis(MatrixX<Scalar> basis, Scalar tol = Scalar(1e-10)) {
  const Eigen::Index dim = basis.cols();
  Eigen::Index r = 0;
  for (Eigen::Index col = 0; col < dim && r < basis.rows(); ++col) {
    Eigen::Index piv = -1;
    Scalar best = tol;
    for (Eigen::Index i = r; i < basis.rows(); ++i)
      if (std::abs(basis(i, col)) > best) {
        best = std::abs(basis(i, col));
        piv = i;
      }
    if (piv < 0) continue;
    basis.row(piv).swap(basis.row(r));
    basis.row(r) /= basis(r, col);
    for (Eigen::Index i = 0; i < basis.rows(); ++i)
      if (i != r) basis.row(i) -= basis(i, col) * basis.row(r);
    ++r;
  }
  MatrixX<Scalar> out = basis.topRows(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < i; ++j)
      out.row(i) -= out.row(i).dot(out.row(j)) * out.row(j);
    out.row(i).normalize();
    for (Eigen::Index c = 0; c < dim; ++c)
      if (std::abs(out(i, c)) > Scalar(1e-9)) {
        if (out(i, c) < 0) out.row(i) = -out.row(i);
        break;
      }
  }
  return out;
}

// Coefficient layouts carry a known lineality: two lines for the 5-coefficient
// cone, three for the 9-coefficient one. -1 means no expectation to enforce.
inline int expected_lineality(Eigen::Index dim) {
  if (dim == 5) return 2;
  if (dim == 9) return 3;
  return -1;
}

template <typename Scalar>
Scalar lex_round(Scalar v) {
  const Scalar r = std::round(v * Scalar(1e6)) / Scalar(1e6);
  return r == Scalar(0) ? Scalar(0) : r;  // fold -0
}

template <typename Scalar>
void sort_rows_lexicographic(MatrixX<Scalar>& m) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Scalar ra = lex_round(m(a, c)), rb = lex_round(m(b, c));
      if (ra != rb) return ra < rb;
    }
    return false;
  });
  MatrixX<Scalar> sorted(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) sorted.row(static_cast<Eigen::Index>(i)) = m.row(order[i]);
  m.swap(sorted);
}

}  // namespace detail

template <typename Scalar>
HyperplaneSet<Scalar> hyperplane_matrix(int n, int order, const MeasurementParams<Scalar>& params) {
  if (order != 2 && order != 3) throw DomainError("hyperplane_matrix: order must be 2 or 3");
  if (n < order) throw DomainError("hyperplane_matrix: need n >= order");
  const BlockSpec block = BlockSpec::symmetric(n);
  const auto settings = settings_for_order(order);
  const Eigen::Index dim = coefficient_count(order);

  std::vector<VectorX<Scalar>> raw;
  std::vector<BandLabel> raw_labels;
  for (int d = 1; d <= order; ++d) {
    std::vector<VectorX<Scalar>> bands;
    bands.reserve(settings.size());
    for (const auto s : settings) bands.push_back(pi_measurement_band<Scalar>(s, params, block, d));
    for (int k = 0; k + d <= n; ++k) {
      Scalar pref = 1;
      for (int j = 0; j < d; ++j) pref *= gamma<Scalar>(k + j, n);
      VectorX<Scalar> row(dim);
      for (Eigen::Index i = 0; i < dim; ++i) row[i] = bands[static_cast<std::size_t>(i)][k] / pref;
      raw.push_back(std::move(row));
      raw_labels.push_back({d, k});
    }
  }

  Scalar scale = 0;
  for (const auto& r : raw) scale = std::max(scale, r.cwiseAbs().maxCoeff());
  const Scalar zero_tol = Scalar(1e-12) * std::max(Scalar(1), scale);

  std::vector<VectorX<Scalar>> kept, kept_units;
  HyperplaneSet<Scalar> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Scalar nrm = raw[i].norm();
    if (nrm <= zero_tol) continue;
    const VectorX<Scalar> unit = raw[i] / nrm;
    bool merged = false;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if ((unit - kept_units[j]).template lpNorm<Eigen::Infinity>() < Scalar(1e-9)) {
        out.labels[j].push_back(raw_labels[i]);
        merged = true;
        break;
      }
    if (merged) continue;
    kept.push_back(raw[i]);
    kept_units.push_back(unit);
    out.labels.push_back({raw_labels[i]});
  }
  out.rows.resize(static_cast<Eigen::Index>(kept.size()), dim);
  for (std::size_t i = 0; i < kept.size(); ++i) out.rows.row(static_cast<Eigen::Index>(i)) = kept[i];
  return out;
}

// Sequential redundancy removal: a row is dropped when it is a nonnegative
// combination of the current remaining rows (homogeneous Farkas). Dropping
// preserves the cone at every step, and rows kept are irredundant against the
// final set because the remaining cone only shrinks afterwards. A second pass
// certifies each kept row; residuals inside (drop_tol, certify_tol] are kept
// but flagged indeterminate.
template <typename Scalar>
HyperplaneSet<Scalar> reduce_irredundant(const HyperplaneSet<Scalar>& h,
                                         Scalar drop_tol = Scalar(1e-8),
                                         Scalar certify_tol = Scalar(1e-6)) {
  const Eigen::Index p = h.rows.rows();
  const Eigen::Index dim = h.rows.cols();
  MatrixX<Scalar> units = h.rows;
  for (Eigen::Index i = 0; i < p; ++i) units.row(i).normalize();

  std::vector<char> kept_flag(static_cast<std::size_t>(p), 1);
  const auto fit = [&](Eigen::Index i) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index j = 0; j < p; ++j)
      if (j != i && kept_flag[static_cast<std::size_t>(j)]) others.push_back(j);
    MatrixX<Scalar> cols(dim, static_cast<Eigen::Index>(others.size()));
    for (std::size_t c = 0; c < others.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = units.row(others[c]).transpose();
    return nnls<Scalar>(cols, units.row(i).transpose());
  };

  if (p > 1)
    for (Eigen::Index i = 0; i < p; ++i) {
      const auto r = fit(i);
      if (r.converged && r.residual_norm <= drop_tol) kept_flag[static_cast<std::size_t>(i)] = 0;
    }

  HyperplaneSet<Scalar> out;
  out.prefactor_stripped = h.prefactor_stripped;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < p; ++i)
    if (kept_flag[static_cast<std::size_t>(i)]) kept.push_back(i);
  out.rows.resize(static_cast<Eigen::Index>(kept.size()), dim);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.rows.row(static_cast<Eigen::Index>(i)) = h.rows.row(kept[i]);
    out.labels.push_back(h.labels[static_cast<std::size_t>(kept[i])]);
  }
  out.indeterminate.assign(kept.size(), 0);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept.size() <= 1) break;
    const auto r = fit(kept[i]);
    if (!r.converged || r.residual_norm <= certify_tol) out.indeterminate[i] = 1;
  }
  return out;
}

// Orthonormal basis of the lineality space (null space of the rows), in a
// deterministic canonical form. Combinations of these vectors change no
// off-diagonal band entry.
template <typename Scalar>
MatrixX<Scalar> lines(const HyperplaneSet<Scalar>& h, Scalar rank_tol = Scalar(1e-10)) {
  const auto split = detail::split_row_space(h.rows, rank_tol);
  return detail::canonical_span_basis(MatrixX<Scalar>(split.kernel.transpose()));
}

enum class RayMethod {
  double_description,  // incremental insertion on the pointed quotient
  combinatorial,       // (rank-1)-subset intersections; small instances only
};

namespace detail {

template <typename Scalar>
struct QuotientRay {
  VectorX<Scalar> y;
  std::vector<char> active;  // parallel to the processed-row list
};

template <typename Scalar>
bool quotient_adjacent(const MatrixX<Scalar>& rows_q, const std::vector<Eigen::Index>& processed,
                       const QuotientRay<Scalar>& a, const QuotientRay<Scalar>& b) {
  const Eigen::Index r = rows_q.cols();
  std::vector<Eigen::Index> common;
  for (std::size_t t = 0; t < processed.size(); ++t)
    if (a.active[t] && b.active[t]) common.push_back(processed[t]);
  if (static_cast<Eigen::Index>(common.size()) < r - 2) return false;
  if (r <= 2) return true;
  MatrixX<Scalar> sub(static_cast<Eigen::Index>(common.size()), r);
  for (std::size_t t = 0; t < common.size(); ++t) sub.row(static_cast<Eigen::Index>(t)) = rows_q.row(common[t]);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(sub);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > Scalar(1e-8) * sv[0]) ++rank;
  return rank == r - 2;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> rays_double_description(const MatrixX<Scalar>& rows_q, Scalar tol) {
  const Eigen::Index p = rows_q.rows();
  const Eigen::Index r = rows_q.cols();

  // greedy independent subset for the simplicial start
  std::vector<Eigen::Index> base;
  MatrixX<Scalar> ortho(r, 0);
  for (Eigen::Index i = 0; i < p && static_cast<Eigen::Index>(base.size()) < r; ++i) {
    VectorX<Scalar> v = rows_q.row(i).transpose();
    for (Eigen::Index j = 0; j < ortho.cols(); ++j) v -= v.dot(ortho.col(j)) * ortho.col(j);
    if (v.norm() > Scalar(1e-9)) {
      ortho.conservativeResize(r, ortho.cols() + 1);
      ortho.col(ortho.cols() - 1) = v.normalized();
      base.push_back(i);
    }
  }
  if (static_cast<Eigen::Index>(base.size()) < r)
    throw DegenerateGeometry("ray enumeration: quotient rows lost rank during initialization");

  MatrixX<Scalar> B(r, r);
  for (Eigen::Index i = 0; i < r; ++i) B.row(i) = rows_q.row(base[static_cast<std::size_t>(i)]);
  const auto lu = B.fullPivLu();

  std::vector<Eigen::Index> processed = base;
  std::vector<char> is_processed(static_cast<std::size_t>(p), 0);
  for (const Eigen::Index i : base) is_processed[static_cast<std::size_t>(i)] = 1;

  const auto activity = [&](const VectorX<Scalar>& y) {
    std::vector<char> act(processed.size());
    for (std::size_t t = 0; t < processed.size(); ++t)
      act[t] = std::abs(rows_q.row(processed[t]).dot(y)) <= tol ? 1 : 0;
    return act;
  };

  std::vector<QuotientRay<Scalar>> rays;
  for (Eigen::Index i = 0; i < r; ++i) {
    VectorX<Scalar> e = VectorX<Scalar>::Zero(r);
    e[i] = -1;
    VectorX<Scalar> y = lu.solve(e);
    y.normalize();
    rays.push_back({y, activity(y)});
  }

  for (Eigen::Index q = 0; q < p; ++q) {
    if (is_processed[static_cast<std::size_t>(q)]) continue;
    const VectorX<Scalar> a = rows_q.row(q).transpose();
    std::vector<Scalar> s(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      s[i] = a.dot(rays[i].y);
      if (s[i] > tol) pos.push_back(i);
      else if (s[i] < -tol) neg.push_back(i);
    }
    std::vector<QuotientRay<Scalar>> fresh;
    for (const std::size_t i : pos)
      for (const std::size_t j : neg) {
        if (!quotient_adjacent(rows_q, processed, rays[i], rays[j])) continue;
        VectorX<Scalar> y = s[i] * rays[j].y - s[j] * rays[i].y;
        const Scalar nrm = y.norm();
        if (nrm < Scalar(1e-12)) continue;
        y /= nrm;
        QuotientRay<Scalar> combo{y, activity(y)};
        combo.active.push_back(1);  // tight on the inserted row by construction
        fresh.push_back(std::move(combo));
      }
    std::vector<QuotientRay<Scalar>> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (s[i] <= tol) {
        rays[i].active.push_back(std::abs(s[i]) <= tol ? 1 : 0);
        next.push_back(std::move(rays[i]));
      }
    for (auto& combo : fresh) next.push_back(std::move(combo));
    processed.push_back(q);
    is_processed[static_cast<std::size_t>(q)] = 1;
    rays = std::move(next);
  }

  // adjacency bookkeeping should prevent duplicates; drop any stragglers
  std::vector<VectorX<Scalar>> out;
  for (const auto& ray : rays) {
    bool dup = false;
    for (const auto& seen : out)
      if (seen.dot(ray.y) > Scalar(1) - Scalar(1e-10)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(ray.y);
  }
  return out;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> rays_combinatorial(const MatrixX<Scalar>& rows_q, Scalar tol) {
  const Eigen::Index p = rows_q.rows();
  const Eigen::Index r = rows_q.cols();
  const auto feasible_orientation = [&](VectorX<Scalar> y) -> std::pair<bool, VectorX<Scalar>> {
    const VectorX<Scalar> prod = rows_q * y;
    if (prod.maxCoeff() <= tol) return {true, y};
    if (prod.minCoeff() >= -tol) return {true, -y};
    return {false, y};
  };

  std::vector<VectorX<Scalar>> out;
  const auto push_unique = [&](const VectorX<Scalar>& y) {
    for (const auto& seen : out)
      if (seen.dot(y) > Scalar(1) - Scalar(1e-7)) return;
    out.push_back(y);
  };

  if (r == 1) {
    VectorX<Scalar> one = VectorX<Scalar>::Constant(1, 1);
    for (const auto& cand : {one, VectorX<Scalar>(-one)}) {
      if ((rows_q * cand).maxCoeff() <= tol) push_unique(cand);
    }
    return out;
  }

  double subsets = 1;
  for (Eigen::Index i = 0; i < r - 1; ++i) subsets *= static_cast<double>(p - i) / static_cast<double>(i + 1);
  if (subsets > 5e6)
    throw DomainError("combinatorial ray enumeration: too many subsets, use double description");

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(r - 1));
  for (Eigen::Index i = 0; i < r - 1; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    MatrixX<Scalar> sub(r - 1, r);
    for (Eigen::Index i = 0; i < r - 1; ++i) sub.row(i) = rows_q.row(idx[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<MatrixX<Scalar>> svd(sub, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > Scalar(1e-9) * std::max(Scalar(1), sv[0])) ++rank;
    if (rank == r - 1) {
      const auto [ok, y] = feasible_orientation(svd.matrixV().col(r - 1));
      if (ok) push_unique(y);
    }
    // next combination
    Eigen::Index i = r - 2;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - (r - 1) + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < r - 1; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace detail

// Extremal rays of {alpha : rows * alpha <= 0} modulo its lineality space.
// Unit norm, orthogonal to the lineality space, oriented so every row product
// is <= 0, sorted lexicographically by components rounded to 6 decimals.
template <typename Scalar>
MatrixX<Scalar> rays(const HyperplaneSet<Scalar>& h,
                     RayMethod method = RayMethod::double_description,
                     Scalar tol = Scalar(1e-9)) {
  const Eigen::Index dim = h.rows.cols();
  const auto split = detail::split_row_space(h.rows, Scalar(1e-10));
  const int expected = detail::expected_lineality(dim);
  if (expected >= 0 && split.rank < dim - expected)
    throw DegenerateGeometry(
        "ray enumeration: row matrix rank " + std::to_string(split.rank) +
        " is below the generic value " + std::to_string(dim - expected) +
        " (degenerate angles); widen tolerances or treat the kernel numerically");
  if (split.rank == 0) return MatrixX<Scalar>(0, dim);

  const MatrixX<Scalar> rows_q = split.normalized * split.range;
  const auto quotient_rays = method == RayMethod::double_description
                                 ? detail::rays_double_description(rows_q, tol)
                                 : detail::rays_combinatorial(rows_q, tol);

  MatrixX<Scalar> out(static_cast<Eigen::Index>(quotient_rays.size()), dim);
  for (std::size_t i = 0; i < quotient_rays.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = (split.range * quotient_rays[i]).transpose();
  detail::sort_rows_lexicographic(out);
  return out;
}

template <typename Scalar>
struct ConeDescription {
  int n = 0;
  int order = 0;
  MeasurementParams<Scalar> params{0, 0};
  HyperplaneSet<Scalar> hyperplanes;  // irredundant rows
  MatrixX<Scalar> rays;               // one unit ray per row, orthogonal to lines
  MatrixX<Scalar> lines;              // orthonormal lineality basis, one per row
  Scalar tolerance = Scalar(1e-9);
  bool degenerate_angles = false;  // advisory: rank may differ from the generic case
};

using ConeDescriptiond = ConeDescription<double>;

template <typename Scalar>
struct MembershipResult {
  bool member = false;
  Scalar margin = 0;  // max row product; membership means margin <= tol
};

template <typename Scalar>
MembershipResult<Scalar> membership(const BellCoefficients<Scalar>& coeffs,
                                    const HyperplaneSet<Scalar>& h, Scalar tol = Scalar(1e-9)) {
  if (h.rows.cols() != coeffs.alpha.size())
    throw DomainError("membership: coefficient dimension does not match hyperplane set");
  MembershipResult<Scalar> res;
  res.margin = h.rows.rows() == 0 ? Scalar(0) : (h.rows * coeffs.alpha).maxCoeff();
  res.member = res.margin <= tol;
  return res;
}

template <typename Scalar>
struct ConeCoordinates {
  VectorX<Scalar> ray_weights;   // nonnegative
  VectorX<Scalar> line_weights;  // unconstrained
};

using ConeCoordinatesd = ConeCoordinates<double>;

template <typename Scalar>
BellCoefficients<Scalar> coords_to_alpha(const ConeCoordinates<Scalar>& coords,
                                         const ConeDescription<Scalar>& cone) {
  if (coords.ray_weights.size() != cone.rays.rows() ||
      coords.line_weights.size() != cone.lines.rows())
    throw DomainError("coords_to_alpha: weight counts do not match the cone generators");
  for (Eigen::Index i = 0; i < coords.ray_weights.size(); ++i)
    if (coords.ray_weights[i] < 0)
      throw ContractViolation("coords_to_alpha: ray weights must be nonnegative");
  VectorX<Scalar> alpha = VectorX<Scalar>::Zero(coefficient_count(cone.order));
  if (coords.ray_weights.size() > 0) alpha += cone.rays.transpose() * coords.ray_weights;
  if (coords.line_weights.size() > 0) alpha += cone.lines.transpose() * coords.line_weights;
  return BellCoefficients<Scalar>(cone.order, alpha);
}

namespace detail {

template <typename Scalar>
bool angles_degenerate(const MeasurementParams<Scalar>& params, Scalar tol = Scalar(1e-9)) {
  using std::abs;
  using std::sin;
  return abs(sin(params.phi)) < tol || abs(sin(params.theta)) < tol ||
         abs(sin(params.phi - params.theta)) < tol;
}

}  // namespace detail

// Full pipeline with cross-validation of every generator against the
// unreduced hyperplane set.
template <typename Scalar>
ConeDescription<Scalar> cone_description(int n, int order, const MeasurementParams<Scalar>& params,
                                         RayMethod method = RayMethod::double_description,
                                         Scalar tol = Scalar(1e-9)) {
  ConeDescription<Scalar> cone;
  cone.n = n;
  cone.order = order;
  cone.params = params;
  cone.tolerance = tol;
  cone.degenerate_angles = detail::angles_degenerate(params);

  const HyperplaneSet<Scalar> full = hyperplane_matrix<Scalar>(n, order, params);
  cone.hyperplanes = reduce_irredundant(full);
  cone.lines = lines(full);
  cone.rays = rays(cone.hyperplanes, method, tol);

  for (Eigen::Index i = 0; i < cone.rays.rows(); ++i) {
    for (Eigen::Index j = 0; j < cone.lines.rows(); ++j)
      cone.rays.row(i) -= cone.rays.row(i).dot(cone.lines.row(j)) * cone.lines.row(j);
    cone.rays.row(i).normalize();
  }

  MatrixX<Scalar> units = full.rows;
  for (Eigen::Index i = 0; i < units.rows(); ++i) units.row(i).normalize();
  for (Eigen::Index i = 0; i < cone.rays.rows(); ++i)
    if ((units * cone.rays.row(i).transpose()).maxCoeff() > tol)
      throw ContractViolation("cone_description: ray fails a hyperplane of the unreduced set");
  for (Eigen::Index j = 0; j < cone.lines.rows(); ++j)
    if (units.rows() > 0 &&
        (units * cone.lines.row(j).transpose()).cwiseAbs().maxCoeff() > tol)
      throw ContractViolation("cone_description: line is not in the kernel of the unreduced set");
  return cone;
}

}  // namespace stoqbell
