#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "stoqbell/bounds.hpp"
#include "stoqbell/cone.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/parent.hpp"
#include "stoqbell/types.hpp"

namespace stoqbell {

// Per-coordinate sweep intervals: ray weight i lives in [0, ray_upper[i]],
// line weights in [-line_upper, line_upper].
//
// convergence_tol defaults to 0 so a run uses all max_passes: the pass-end
// renormalization (see sweep_optimize) regrids the incumbent, so a pass that
// stalls can still be followed by one that improves. Set a positive tolerance
// to stop at the first stalled pass instead.
template <typename Scalar = double>
struct SweepConfig {
  VectorX<Scalar> ray_upper;
  Scalar line_upper = 1;
  int grid_points = 101;
  int max_passes = 24;
  Scalar convergence_tol = Scalar(0);
  std::uint64_t rng_seed = 0;
};

using SweepConfigd = SweepConfig<double>;

// Interval rule: a ray stored with components that grow with n (raw
// generators rather than unit vectors) gets the tighter [0, 1/n] range.
template <typename Scalar>
SweepConfig<Scalar> default_sweep_config(const ConeDescription<Scalar>& cone,
                                         std::uint64_t seed = 0) {
  SweepConfig<Scalar> cfg;
  cfg.rng_seed = seed;
  cfg.ray_upper.resize(cone.rays.rows());
  for (Eigen::Index i = 0; i < cone.rays.rows(); ++i)
    cfg.ray_upper[i] = cone.rays.row(i).cwiseAbs().maxCoeff() > Scalar(2)
                           ? Scalar(1) / Scalar(cone.n)
                           : Scalar(1);
  return cfg;
}

template <typename Scalar = double>
struct SweepEntry {
  int pass = 0;
  int coord = 0;                // ray coordinates first, then line coordinates
  Scalar value = 0;             // coordinate value kept after this sweep
  std::optional<Scalar> gap;    // incumbent objective, empty while undefined
};

enum class SweepStatus { ok, no_violation_found };

template <typename Scalar = double>
struct SweepResult {
  SweepStatus status = SweepStatus::ok;
  ConeCoordinates<Scalar> coords;
  BellCoefficients<Scalar> alpha;
  std::optional<Scalar> gap;
  Scalar beta_q = 0;
  std::vector<SweepEntry<Scalar>> trace;
  std::uint64_t seed = 0;
};

using SweepResultd = SweepResult<double>;

namespace detail {

template <typename Scalar>
struct SweepEval {
  std::optional<Scalar> gap;
  Scalar beta_q = 0;
};

// Candidate A beats candidate B when its objective is defined and larger;
// any defined objective beats an undefined one.
template <typename Scalar>
bool sweep_better(const SweepEval<Scalar>& a, const SweepEval<Scalar>& b) {
  if (!a.gap) return false;
  if (!b.gap) return true;
  return *a.gap > *b.gap;
}

}  // namespace detail

// Greedy coordinate sweep (single start). Every candidate, incumbent
// included, is a cone member by construction, so the monotone trace only
// moves between stoquastic operators.
//
// The objective is invariant under positive rescaling of the coordinate
// vector, which the sweep exploits twice. The start point is sparse: a
// single seeded coordinate is nonzero, so the walk enters near a face of
// the cone instead of deep in its interior. After each pass the incumbent
// is renormalized to a pass-dependent fraction of its box (a low-discrepancy
// ladder keeps the fractions spread out); the represented operator is
// unchanged, but the grid lands on fresh values of the same ray, which
// frees the walk from points that are only optimal up to grid rounding.
// Ends with one refinement pass over the full intervals at ten times the
// grid resolution.
template <typename Scalar>
SweepResult<Scalar> sweep_optimize(const ConeDescription<Scalar>& cone,
                                   const SweepConfig<Scalar>& config) {
  const Eigen::Index nr = cone.rays.rows();
  const Eigen::Index nl = cone.lines.rows();
  if (nr + nl == 0) throw DomainError("sweep_optimize: cone has no generators");
  if (config.grid_points < 3) throw DomainError("sweep_optimize: grid_points must be >= 3");
  if (config.max_passes < 1) throw DomainError("sweep_optimize: max_passes must be >= 1");
  if (config.convergence_tol < Scalar(0))
    throw DomainError("sweep_optimize: convergence_tol must be >= 0");
  if (config.ray_upper.size() != nr)
    throw DomainError("sweep_optimize: ray_upper length does not match the cone");
  if ((nr > 0 && config.ray_upper.minCoeff() <= Scalar(0)) ||
      (nl > 0 && config.line_upper <= Scalar(0)))
    throw DomainError("sweep_optimize: sweep intervals must be nonempty");

  SweepResult<Scalar> result;
  result.seed = config.rng_seed;

  const auto upper = [&](Eigen::Index idx) {
    return idx < nr ? config.ray_upper[idx] : config.line_upper;
  };

  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
  const Scalar ladder_offset = unit(rng);
  ConeCoordinates<Scalar> coords;
  coords.ray_weights = VectorX<Scalar>::Zero(nr);
  coords.line_weights = VectorX<Scalar>::Zero(nl);
  const Eigen::Index pick =
      std::min<Eigen::Index>(nr + nl - 1, static_cast<Eigen::Index>(unit(rng) * Scalar(nr + nl)));
  if (pick < nr)
    coords.ray_weights[pick] = unit(rng) * config.ray_upper[pick];
  else
    coords.line_weights[pick - nr] = (Scalar(2) * unit(rng) - Scalar(1)) * config.line_upper;

  bool any_candidate = false;
  detail::SweepEval<Scalar> best_by_beta_q;
  ConeCoordinates<Scalar> best_beta_q_coords;

  const auto evaluate = [&](const ConeCoordinates<Scalar>& c) {
    detail::SweepEval<Scalar> ev;
    const auto alpha = coords_to_alpha(c, cone);
    if (alpha.alpha.cwiseAbs().maxCoeff() == Scalar(0)) return ev;  // empty operator
    const auto rep = gap(alpha, cone.params, cone.n);
    ev.beta_q = rep.beta_q;
    ev.gap = rep.gap;
    if (!any_candidate || ev.beta_q < best_by_beta_q.beta_q) {
      any_candidate = true;
      best_by_beta_q = ev;
      best_beta_q_coords = c;
    }
    return ev;
  };

  auto incumbent = evaluate(coords);

  const auto coordinate_ref = [&](ConeCoordinates<Scalar>& c, Eigen::Index idx) -> Scalar& {
    return idx < nr ? c.ray_weights[idx] : c.line_weights[idx - nr];
  };

  // Scales the coordinate vector so its largest box fraction is `target`.
  // Pure gauge: the represented operator and the incumbent objective stay
  // the same, only the grid alignment changes.
  const auto renormalize = [&](Scalar target) {
    Scalar frac = Scalar(0);
    for (Eigen::Index idx = 0; idx < nr + nl; ++idx)
      frac = std::max(frac, std::abs(coordinate_ref(coords, idx)) / upper(idx));
    if (frac <= Scalar(0)) return;
    const Scalar t = target / frac;
    coords.ray_weights *= t;
    coords.line_weights *= t;
  };

  // Sweeps coordinate idx over [lo, hi]; keeps the incumbent on ties so
  // among grid candidates the lowest index wins.
  const auto sweep_coordinate = [&](Eigen::Index idx, Scalar lo, Scalar hi, int points,
                                    int pass) {
    Scalar best_value = coordinate_ref(coords, idx);
    ConeCoordinates<Scalar> trial = coords;
    for (int g = 0; g < points; ++g) {
      const Scalar v = lo + (hi - lo) * Scalar(g) / Scalar(points - 1);
      coordinate_ref(trial, idx) = v;
      const auto ev = evaluate(trial);
      if (detail::sweep_better(ev, incumbent)) {
        incumbent = ev;
        best_value = v;
      }
    }
    coordinate_ref(coords, idx) = best_value;
    result.trace.push_back({pass, static_cast<int>(idx), best_value, incumbent.gap});
  };

  constexpr Scalar kGolden = Scalar(0.6180339887498949);
  int pass = 0;
  for (; pass < config.max_passes; ++pass) {
    const auto before = incumbent;
    for (Eigen::Index idx = 0; idx < nr + nl; ++idx) {
      const Scalar lo = idx < nr ? Scalar(0) : -config.line_upper;
      sweep_coordinate(idx, lo, upper(idx), config.grid_points, pass);
    }
    renormalize(Scalar(0.25) +
                Scalar(0.5) * std::fmod(ladder_offset + kGolden * Scalar(pass + 1), Scalar(1)));
    const bool gained_definition = incumbent.gap && !before.gap;
    const Scalar gain =
        incumbent.gap && before.gap ? *incumbent.gap - *before.gap : Scalar(0);
    if (!gained_definition && gain < config.convergence_tol) {
      ++pass;
      break;
    }
  }

  const int fine_points = 10 * (config.grid_points - 1) + 1;
  for (Eigen::Index idx = 0; idx < nr + nl; ++idx) {
    const Scalar lo = idx < nr ? Scalar(0) : -config.line_upper;
    sweep_coordinate(idx, lo, upper(idx), fine_points, pass);
  }

  result.coords = coords;
  result.alpha = coords_to_alpha(coords, cone);
  if (incumbent.gap) {
    result.gap = incumbent.gap;
    result.beta_q = incumbent.beta_q;
  } else {
    result.status = SweepStatus::no_violation_found;
    if (any_candidate) {
      result.coords = best_beta_q_coords;
      result.alpha = coords_to_alpha(best_beta_q_coords, cone);
      result.beta_q = best_by_beta_q.beta_q;
    }
  }
  return result;
}

// Best of `restarts` seeded runs; restart t uses rng_seed + t. A run with
// a defined objective always outranks one without.
template <typename Scalar>
SweepResult<Scalar> multi_restart_optimize(const ConeDescription<Scalar>& cone,
                                           const SweepConfig<Scalar>& base,
                                           int restarts = 8) {
  if (restarts < 1) throw DomainError("multi_restart_optimize: restarts must be >= 1");
  std::optional<SweepResult<Scalar>> best;
  for (int t = 0; t < restarts; ++t) {
    SweepConfig<Scalar> cfg = base;
    cfg.rng_seed = base.rng_seed + static_cast<std::uint64_t>(t);
    auto run = sweep_optimize(cone, cfg);
    const bool wins =
        !best ||
        (run.gap && (!best->gap || *run.gap > *best->gap)) ||
        (!run.gap && !best->gap && run.beta_q < best->beta_q);
    if (wins) best = std::move(run);
  }
  return *best;
}

// One row of the (phi, theta) violation scan. The classical bound does not
// depend on the angles, so it is computed once per alpha and repeated.
template <typename Scalar = double>
struct ScanRow {
  Scalar phi = 0;
  Scalar theta = 0;
  Scalar beta_q = 0;
  Scalar beta_c = 0;
  std::optional<Scalar> gap;
  bool violation = false;
};

using ScanRowd = ScanRow<double>;

template <typename Scalar>
std::vector<ScanRow<Scalar>> grid_scan(const BellCoefficients<Scalar>& alpha, int n,
                                       Scalar phi_lo, Scalar phi_hi, Scalar theta_lo,
                                       Scalar theta_hi, int phi_points, int theta_points) {
  if (phi_points < 2 || theta_points < 2)
    throw DomainError("grid_scan: need at least 2 points per axis");
  const auto classical = beta_c(alpha, n);
  std::vector<ScanRow<Scalar>> rows;
  rows.reserve(static_cast<std::size_t>(phi_points) * theta_points);
  for (int i = 0; i < phi_points; ++i) {
    const Scalar phi = phi_lo + (phi_hi - phi_lo) * Scalar(i) / Scalar(phi_points - 1);
    for (int j = 0; j < theta_points; ++j) {
      const Scalar theta = theta_lo + (theta_hi - theta_lo) * Scalar(j) / Scalar(theta_points - 1);
      ScanRow<Scalar> row;
      row.phi = phi;
      row.theta = theta;
      row.beta_c = classical.value;
      row.beta_q = beta_q(build_block(alpha, MeasurementParams<Scalar>(phi, theta),
                                      BlockSpec(n, n)))
                       .value;
      if (classical.value < Scalar(0)) {
        row.gap = row.beta_q / row.beta_c;
        row.violation = *row.gap > Scalar(1) + Scalar(1e-9);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

template <typename Scalar = double>
struct GaussianFit {
  GaussianProfile<Scalar> profile;
  Scalar amplitude = 0;      // peak of the fitted squared-amplitude profile
  Scalar rms_residual = 0;   // over squared amplitudes
  bool degenerate = false;   // sigma hit the 1e-3 floor
};

using GaussianFitd = GaussianFit<double>;

// Least-squares fit of phi_k^2 to A exp(-(k - mu)^2 / (2 sigma)): moment
// start, then damped Gauss-Newton on (A, mu, sigma).
template <typename Scalar>
GaussianFit<Scalar> gaussian_fit(const DickeState<Scalar>& state) {
  const int n = state.n;
  const VectorX<Scalar> p = state.amplitudes.array().square();
  const Scalar sigma_floor = Scalar(1e-3);

  Scalar mu = 0;
  for (int k = 0; k <= n; ++k) mu += Scalar(k) * p[k];
  Scalar var = 0;
  for (int k = 0; k <= n; ++k) var += (Scalar(k) - mu) * (Scalar(k) - mu) * p[k];
  Scalar sigma = std::max(var, sigma_floor);
  Scalar amp = p.maxCoeff();

  const auto model = [&](Scalar a, Scalar m, Scalar s, int k) {
    const Scalar d = Scalar(k) - m;
    return a * std::exp(-d * d / (Scalar(2) * s));
  };
  const auto sum_sq = [&](Scalar a, Scalar m, Scalar s) {
    Scalar acc = 0;
    for (int k = 0; k <= n; ++k) {
      const Scalar r = model(a, m, s, k) - p[k];
      acc += r * r;
    }
    return acc;
  };

  Scalar cost = sum_sq(amp, mu, sigma);
  Scalar damping = Scalar(1e-8);
  for (int iter = 0; iter < 80; ++iter) {
    Eigen::Matrix<Scalar, 3, 3> jtj = Eigen::Matrix<Scalar, 3, 3>::Zero();
    Eigen::Matrix<Scalar, 3, 1> jtr = Eigen::Matrix<Scalar, 3, 1>::Zero();
    for (int k = 0; k <= n; ++k) {
      const Scalar d = Scalar(k) - mu;
      const Scalar e = std::exp(-d * d / (Scalar(2) * sigma));
      const Scalar r = amp * e - p[k];
      Eigen::Matrix<Scalar, 3, 1> j;
      j << e, amp * e * d / sigma, amp * e * d * d / (Scalar(2) * sigma * sigma);
      jtj += j * j.transpose();
      jtr += j * r;
    }
    jtj.diagonal().array() += damping;
    const Eigen::Matrix<Scalar, 3, 1> step = jtj.ldlt().solve(jtr);
    const Scalar amp_t = amp - step[0];
    const Scalar mu_t = mu - step[1];
    const Scalar sigma_t = std::max(sigma - step[2], sigma_floor);
    const Scalar cost_t = sum_sq(amp_t, mu_t, sigma_t);
    if (cost_t < cost) {
      const Scalar rel = std::abs(cost - cost_t) / (cost + Scalar(1e-300));
      amp = amp_t;
      mu = mu_t;
      sigma = sigma_t;
      cost = cost_t;
      damping = std::max(damping / 4, Scalar(1e-12));
      if (rel < Scalar(1e-14)) break;
    } else {
      damping *= 10;
      if (damping > Scalar(1e8)) break;
    }
  }

  GaussianFit<Scalar> fit;
  fit.profile = {mu, sigma, n};
  fit.amplitude = amp;
  fit.rms_residual = std::sqrt(cost / Scalar(n + 1));
  fit.degenerate = sigma <= sigma_floor;
  return fit;
}

}  // namespace stoqbell
