#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stoqbell/optimize.hpp"

using namespace stoqbell;
namespace nb = std::numbers;

namespace {

const MeasurementParamsd kRefAngles(nb::pi / 6, 5 * nb::pi / 6);

void check_trace(const SweepResultd& run, const ConeDescriptiond& cone) {
  double last = -1e300;
  for (const auto& entry : run.trace)
    if (entry.gap) {
      CHECK(*entry.gap >= last - 1e-12);
      last = *entry.gap;
    }
  const auto verdict = membership(run.alpha, cone.hyperplanes, cone.tolerance);
  CHECK(verdict.member);
}

}  // namespace

TEST_CASE("interval rule keys on stored component magnitude") {
  const auto cone = cone_description(10, 2, kRefAngles);
  const auto cfg = default_sweep_config(cone);
  REQUIRE(cfg.ray_upper.size() == cone.rays.rows());
  for (Eigen::Index i = 0; i < cfg.ray_upper.size(); ++i)
    CHECK(cfg.ray_upper[i] == 1.0);  // stored rays are unit vectors

  ConeDescriptiond raw = cone;
  raw.rays.row(0) *= std::sqrt(3.0) * 9;  // raw-generator scale
  const auto cfg2 = default_sweep_config(raw);
  CHECK(cfg2.ray_upper[0] == doctest::Approx(0.1));
  CHECK(cfg2.ray_upper[1] == 1.0);
}

TEST_CASE("sweep on the reference cone: monotone, feasible, reproducible") {
  const auto cone = cone_description(10, 2, kRefAngles);
  auto cfg = default_sweep_config(cone, 1);
  const auto run = sweep_optimize(cone, cfg);
  CHECK(run.status == SweepStatus::ok);
  REQUIRE(run.gap.has_value());
  check_trace(run, cone);

  const auto rerun = sweep_optimize(cone, cfg);
  REQUIRE(rerun.trace.size() == run.trace.size());
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    CHECK(rerun.trace[i].pass == run.trace[i].pass);
    CHECK(rerun.trace[i].coord == run.trace[i].coord);
    CHECK(rerun.trace[i].value == run.trace[i].value);
    CHECK(rerun.trace[i].gap.has_value() == run.trace[i].gap.has_value());
    if (run.trace[i].gap) CHECK(*rerun.trace[i].gap == *run.trace[i].gap);
  }
  CHECK(rerun.coords.ray_weights == run.coords.ray_weights);

  cfg.rng_seed = 2;
  const auto other = sweep_optimize(cone, cfg);
  CHECK(other.seed == 2);
}

TEST_CASE("best of eight restarts reaches the reference optimum") {
  const auto cone = cone_description(10, 2, kRefAngles);
  const auto best = multi_restart_optimize(cone, default_sweep_config(cone), 8);
  REQUIRE(best.gap.has_value());
  CHECK(*best.gap >= 1.054);
  check_trace(best, cone);
}

TEST_CASE("objective is scale invariant over the cone") {
  const auto cone = cone_description(10, 2, kRefAngles);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    ConeCoordinatesd coords;
    coords.ray_weights = Eigen::VectorXd::NullaryExpr(cone.rays.rows(), [&] { return u(rng); });
    coords.line_weights =
        Eigen::VectorXd::NullaryExpr(cone.lines.rows(), [&] { return 2 * u(rng) - 1; });
    const auto alpha = coords_to_alpha(coords, cone);
    if (alpha.alpha.cwiseAbs().maxCoeff() == 0.0) continue;
    const auto base = gap(alpha, cone.params, cone.n);
    if (!base.gap) continue;
    for (double t : {0.35, 2.0, 9.0}) {
      const BellCoefficientsd scaled(alpha.order, t * alpha.alpha);
      const auto rep2 = gap(scaled, cone.params, cone.n);
      REQUIRE(rep2.gap.has_value());
      CHECK(*rep2.gap == doctest::Approx(*base.gap).epsilon(1e-10));
    }
  }
}

TEST_CASE("single-ray cone: constant objective stops after one pass") {
  const auto full = cone_description(8, 2, kRefAngles);
  ConeDescriptiond tiny = full;
  tiny.rays = full.rays.row(0);
  tiny.lines.resize(0, full.rays.cols());
  auto cfg = default_sweep_config(tiny, 3);
  cfg.convergence_tol = 1e-9;  // stop at the first stalled pass
  const auto run = sweep_optimize(tiny, cfg);
  CHECK(run.trace.size() == 2);  // one sweep pass plus one refinement pass
  check_trace(run, tiny);
  if (run.gap) {
    for (const auto& e : run.trace)
      if (e.gap) CHECK(*e.gap == doctest::Approx(*run.gap).epsilon(1e-12));
  }
}

TEST_CASE("sweep rejects malformed configs") {
  const auto cone = cone_description(8, 2, kRefAngles);
  auto cfg = default_sweep_config(cone);
  cfg.grid_points = 2;
  CHECK_THROWS_AS(sweep_optimize(cone, cfg), DomainError);
  cfg = default_sweep_config(cone);
  cfg.ray_upper.resize(1);
  CHECK_THROWS_AS(sweep_optimize(cone, cfg), DomainError);
  cfg = default_sweep_config(cone);
  cfg.line_upper = 0;
  CHECK_THROWS_AS(sweep_optimize(cone, cfg), DomainError);
  cfg = default_sweep_config(cone);
  cfg.convergence_tol = -1e-6;
  CHECK_THROWS_AS(sweep_optimize(cone, cfg), DomainError);
  ConeDescriptiond empty = cone;
  empty.rays.resize(0, cone.rays.cols());
  empty.lines.resize(0, cone.rays.cols());
  CHECK_THROWS_AS(sweep_optimize(empty, default_sweep_config(empty)), DomainError);
}

TEST_CASE("higher-order cone sweep reaches the embedded two-body optimum") {
  const auto cone = cone_description(10, 3, MeasurementParamsd(nb::pi / 4, -nb::pi / 4));
  const auto best = multi_restart_optimize(cone, default_sweep_config(cone, 8), 8);
  REQUIRE(best.gap.has_value());
  CHECK(*best.gap >= 1.0290);
  check_trace(best, cone);
}

TEST_CASE("violation scan rows, ordering, and flags") {
  Eigen::VectorXd a(5);
  a << -2, 0, 0.5, -1, 0.5;
  const BellCoefficientsd alpha(2, a);
  const auto rows = grid_scan(alpha, 10, nb::pi / 6, nb::pi / 3, 5 * nb::pi / 6, nb::pi, 3, 2);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].phi == doctest::Approx(nb::pi / 6));
  CHECK(rows[0].theta == doctest::Approx(5 * nb::pi / 6));
  CHECK(rows[1].phi == doctest::Approx(nb::pi / 6));  // phi outer, theta inner
  CHECK(rows[1].theta == doctest::Approx(nb::pi));
  for (const auto& r : rows) CHECK(r.beta_c == doctest::Approx(-20.0));
  REQUIRE(rows[0].gap.has_value());
  CHECK(*rows[0].gap == doctest::Approx(1.05442).epsilon(5e-5));
  CHECK(rows[0].violation);

  const auto quiet = grid_scan(alpha, 6, 0.0, nb::pi, 0.0, nb::pi, 2, 2);
  for (const auto& r : quiet)
    if (std::abs(std::sin(r.phi)) < 1e-9 && std::abs(std::sin(r.theta)) < 1e-9) {
      REQUIRE(r.gap.has_value());
      CHECK(*r.gap <= 1.0 + 1e-9);
      CHECK(!r.violation);
    }

  CHECK_THROWS_AS(grid_scan(alpha, 6, 0.0, 1.0, 0.0, 1.0, 1, 2), DomainError);
}

TEST_CASE("violating region does not shrink with n") {
  Eigen::VectorXd a(5);
  a << -2, 0, 0.5, -1, 0.5;
  const BellCoefficientsd alpha(2, a);
  int cells10 = 0, cells20 = 0;
  for (const auto& r : grid_scan(alpha, 10, 0.0, nb::pi, 0.0, nb::pi, 12, 12))
    cells10 += r.violation;
  for (const auto& r : grid_scan(alpha, 20, 0.0, nb::pi, 0.0, nb::pi, 12, 12))
    cells20 += r.violation;
  CHECK(cells10 >= 1);
  CHECK(cells20 >= cells10);
}

TEST_CASE("gaussian fit recovers planted profiles") {
  const auto planted = gaussian_state<double>({25.0, 5.0, 50});
  const auto fit = gaussian_fit(planted);
  CHECK(std::abs(fit.profile.mu - 25.0) < 0.1);
  CHECK(std::abs(fit.profile.sigma - 5.0) / 5.0 < 0.02);
  CHECK(!fit.degenerate);
  CHECK(fit.rms_residual < 1e-6);

  const auto wide = gaussian_fit(gaussian_state<double>({25.0, std::sqrt(50.0), 50}));
  CHECK(std::abs(wide.profile.mu - 25.0) < 0.1);
  CHECK(std::abs(wide.profile.sigma - std::sqrt(50.0)) / std::sqrt(50.0) < 0.02);
}

TEST_CASE("gaussian fit on an optimized ground state") {
  Eigen::VectorXd a(5);
  a << -2, 0, 0.5, -1, 0.5;
  const auto rep = gap(BellCoefficientsd(2, a), kRefAngles, 50);
  const auto state = sanitize_state(50, rep.ground_state);
  const auto fit = gaussian_fit(state);
  CHECK(!fit.degenerate);
  CHECK(fit.rms_residual < 0.1 * fit.amplitude);
}

TEST_CASE("gaussian fit degeneracy and honest misfit") {
  const auto spike = gaussian_fit(basis_state(10, 4));
  CHECK(spike.degenerate);
  CHECK(spike.profile.sigma == doctest::Approx(1e-3));
  CHECK(std::abs(spike.profile.mu - 4.0) < 0.05);

  // A uniform profile is the sigma -> infinity limit of a flat gaussian, so
  // the fit succeeds with a huge width rather than a large residual.
  const auto flat = gaussian_fit(uniform_state(30));
  CHECK(flat.profile.sigma > 50.0);
  CHECK(flat.rms_residual < 1e-3);

  // A bimodal profile has no single-gaussian description; the residual must
  // stay large no matter where the optimizer settles.
  const auto lobe_a = gaussian_state<double>({8.0, 2.0, 30});
  const auto lobe_b = gaussian_state<double>({22.0, 2.0, 30});
  Eigen::VectorXd mix = lobe_a.amplitudes + lobe_b.amplitudes;
  const auto bimodal = sanitize_state(30, mix);
  const auto fit = gaussian_fit(bimodal);
  CHECK(fit.rms_residual > 0.2 * fit.amplitude);
}
