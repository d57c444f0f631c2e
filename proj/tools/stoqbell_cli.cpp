// Command-line front end: builds Bell operators in the Dicke blocks, solves
// stoquasticity cones, runs the coordinate-sweep optimizer and the angle
// scan, and inspects parent Hamiltonians and the tangent two-body class.
//
// Exit codes: 0 success (and any checked property holds), 2 a checked
// property is negative (operator not stoquastic, no violation found),
// 64 usage error, 1 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stoqbell/cone_analytic.hpp"
#include "stoqbell/io.hpp"
#include "stoqbell/threads.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitNegative = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_radians(double angle, bool degrees) {
  return degrees ? angle * std::numbers::pi / 180.0 : angle;
}

stoqbell::BellCoefficientsd parse_alpha(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--alpha: cannot parse '" + item + "' as a number");
    }
  }
  int order = 0;
  for (int k = 1; k <= 3; ++k)
    if (static_cast<Eigen::Index>(values.size()) == stoqbell::coefficient_count(k)) order = k;
  if (order == 0)
    throw UsageError("--alpha: expected 2, 5, or 9 comma-separated coefficients, got " +
                     std::to_string(values.size()));
  Eigen::VectorXd alpha =
      Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return stoqbell::BellCoefficientsd(order, alpha);
}

// JSON documents go to --out when given (with a one-line summary on stdout),
// otherwise to stdout with the summary on stderr.
void emit(const nlohmann::json& doc, const std::string& out_path, const std::string& summary) {
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << doc.dump(2) << "\n";
    if (!summary.empty()) std::cout << summary << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
    if (!summary.empty()) std::cerr << summary << "\n";
  }
}

struct CommonOpts {
  bool degrees = false;
  int threads = 0;
};

int run_operator(const CommonOpts& common, const std::string& alpha_text, double phi, double theta,
                 int n, std::optional<int> two_j, double tol, const std::string& out_path) {
  const auto coeffs = parse_alpha(alpha_text);
  const stoqbell::MeasurementParamsd params(to_radians(phi, common.degrees),
                                            to_radians(theta, common.degrees));
  const stoqbell::BlockSpec spec(n, two_j ? *two_j : n);
  const auto block = stoqbell::build_block(coeffs, params, spec);
  const auto report = stoqbell::check_stoquastic(block, tol);

  nlohmann::json doc = stoqbell::to_json(block);
  doc["stoquastic"] = report.stoquastic;
  doc["report"] = stoqbell::to_json(report);
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "operator", {{"alpha", alpha_text}, {"phi", params.phi}, {"theta", params.theta},
                   {"n", n}, {"two_j", spec.two_j}, {"tol", tol}}));
  std::ostringstream summary;
  summary << "block 2J=" << spec.two_j << " dim " << block.dim() << ": "
          << (report.stoquastic ? "stoquastic" : "not stoquastic");
  emit(doc, out_path, summary.str());
  return report.stoquastic ? kExitOk : kExitNegative;
}

int run_cone(const CommonOpts& common, int n, int order, double phi, double theta,
             const std::string& method, double tol, const std::string& out_path) {
  const stoqbell::MeasurementParamsd params(to_radians(phi, common.degrees),
                                            to_radians(theta, common.degrees));
  stoqbell::ConeDescriptiond cone;
  if (method == "analytic") {
    if (order != 2) throw UsageError("--method analytic is only available for --K 2");
    try {
      cone = stoqbell::analytic_two_body(n, params, tol);
    } catch (const stoqbell::AnalyticDegenerate& e) {
      std::cerr << "warning: " << e.what() << "; falling back to the numeric pipeline\n";
      cone = stoqbell::cone_description(n, order, params,
                                        stoqbell::RayMethod::double_description, tol);
    }
  } else {
    const auto ray_method = method == "combinatorial" ? stoqbell::RayMethod::combinatorial
                                                      : stoqbell::RayMethod::double_description;
    cone = stoqbell::cone_description(n, order, params, ray_method, tol);
  }

  nlohmann::json doc = stoqbell::to_json(cone);
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "cone", {{"n", n}, {"K", order}, {"phi", params.phi}, {"theta", params.theta},
               {"method", method}, {"tol", tol}}));
  std::ostringstream summary;
  summary << cone.rays.rows() << " rays, " << cone.lines.rows() << " lines";
  if (cone.degenerate_angles) summary << " (degenerate angles)";
  emit(doc, out_path, summary.str());
  return kExitOk;
}

int run_bounds(const CommonOpts& common, const std::string& alpha_text, double phi, double theta,
               int n, bool all_blocks, const std::string& out_path) {
  const auto coeffs = parse_alpha(alpha_text);
  const stoqbell::MeasurementParamsd params(to_radians(phi, common.degrees),
                                            to_radians(theta, common.degrees));
  const auto rep = stoqbell::gap(coeffs, params, n, all_blocks);

  nlohmann::json doc = stoqbell::to_json(rep);
  doc["two_j"] = rep.two_j;
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "bounds", {{"alpha", alpha_text}, {"phi", params.phi}, {"theta", params.theta},
                 {"n", n}, {"all_blocks", all_blocks}}));
  std::ostringstream summary;
  summary << "beta_q " << rep.beta_q << ", beta_c " << rep.beta_c;
  if (rep.gap) summary << ", gap " << *rep.gap;
  emit(doc, out_path, summary.str());
  return kExitOk;
}

int run_optimize(const std::string& cone_path, std::uint64_t seed, int restarts, int grid_points,
                 int max_passes, double tol, double line_upper, const std::string& ray_upper_text,
                 const std::string& out_path) {
  std::ifstream f(cone_path);
  if (!f) throw UsageError("--cone-file: cannot open " + cone_path);
  nlohmann::json cone_doc;
  try {
    f >> cone_doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--cone-file: " + std::string(e.what()));
  }
  const auto cone = stoqbell::parse_cone_json(cone_doc);

  auto cfg = stoqbell::default_sweep_config(cone, seed);
  cfg.grid_points = grid_points;
  cfg.max_passes = max_passes;
  cfg.convergence_tol = tol;
  if (line_upper > 0) cfg.line_upper = line_upper;
  if (!ray_upper_text.empty()) {
    std::stringstream ss(ray_upper_text);
    std::string item;
    std::vector<double> uppers;
    while (std::getline(ss, item, ',')) uppers.push_back(std::stod(item));
    if (uppers.size() == 1)
      cfg.ray_upper.setConstant(uppers[0]);
    else if (static_cast<Eigen::Index>(uppers.size()) == cfg.ray_upper.size())
      for (Eigen::Index i = 0; i < cfg.ray_upper.size(); ++i) cfg.ray_upper[i] = uppers[i];
    else
      throw UsageError("--ray-upper: expected 1 or " + std::to_string(cfg.ray_upper.size()) +
                       " values");
  }

  const auto run = stoqbell::multi_restart_optimize(cone, cfg, restarts);

  nlohmann::json doc = stoqbell::to_json(run);
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "optimize",
      {{"cone_file", cone_path}, {"restarts", restarts}, {"grid_points", grid_points},
       {"max_passes", max_passes}, {"convergence_tol", tol}},
      seed));
  std::ostringstream summary;
  if (run.gap)
    summary << "gap " << *run.gap << " (seed " << run.seed << ")";
  else
    summary << "no violation found; best beta_q " << run.beta_q;
  emit(doc, out_path, summary.str());
  return run.status == stoqbell::SweepStatus::ok ? kExitOk : kExitNegative;
}

int run_scan(const CommonOpts& common, const std::string& alpha_text, int n, double phi_min,
             double phi_max, double theta_min, double theta_max, int phi_points, int theta_points,
             const std::string& out_path) {
  const auto coeffs = parse_alpha(alpha_text);
  const auto rows = stoqbell::grid_scan(
      coeffs, n, to_radians(phi_min, common.degrees), to_radians(phi_max, common.degrees),
      to_radians(theta_min, common.degrees), to_radians(theta_max, common.degrees), phi_points,
      theta_points);

  int violations = 0;
  for (const auto& r : rows) violations += r.violation;

  const auto manifest = stoqbell::to_json(stoqbell::make_manifest(
      "scan", {{"alpha", alpha_text}, {"n", n}, {"phi_min", phi_min}, {"phi_max", phi_max},
               {"theta_min", theta_min}, {"theta_max", theta_max}, {"phi_points", phi_points},
               {"theta_points", theta_points}, {"deg", common.degrees}}));
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    stoqbell::write_scan_csv(rows, f);
    std::ofstream mf(out_path + ".manifest.json");
    if (mf) mf << manifest.dump(2) << "\n";
    std::cout << rows.size() << " rows, " << violations << " violating\n";
  } else {
    stoqbell::write_scan_csv(rows, std::cout);
    std::cerr << rows.size() << " rows, " << violations << " violating\n";
  }
  return violations > 0 ? kExitOk : kExitNegative;
}

int run_parent(const CommonOpts& common, const std::string& state_name, int n, int k, double mu,
               double sigma, bool decompose, double tol, const std::string& out_path) {
  stoqbell::DickeStated state;
  if (state_name == "ghz")
    state = stoqbell::ghz_state<double>(n);
  else if (state_name == "uniform")
    state = stoqbell::uniform_state<double>(n);
  else if (state_name == "basis")
    state = stoqbell::basis_state<double>(n, k);
  else if (state_name == "gaussian")
    state = stoqbell::gaussian_state<double>({mu, sigma, n});
  else
    throw UsageError("--state: expected ghz, uniform, basis, or gaussian");

  const auto h = stoqbell::parent_hamiltonian(state);
  const auto report = stoqbell::check_stoquastic(h, tol);
  const auto ground = stoqbell::beta_q(h);

  nlohmann::json doc = stoqbell::to_json(h);
  doc["stoquastic"] = report.stoquastic;
  doc["report"] = stoqbell::to_json(report);
  doc["ground_energy"] = stoqbell::round_sig(ground.value);
  std::ostringstream summary;
  summary << "parent of " << state_name << " n=" << n << ": "
          << (report.stoquastic ? "stoquastic" : "not stoquastic") << ", ground energy "
          << ground.value;
  if (decompose) {
    const auto terms =
        stoqbell::pauli_weight_decompose(h, state.n, 1e-10, 1e-11,
                                         stoqbell::resolve_threads(common.threads));
    doc["terms"] = stoqbell::to_json(terms);
    const int deg = stoqbell::max_order(terms);
    doc["max_K"] = deg;
    summary << ", max K = " << deg;
  }
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "parent", {{"state", state_name}, {"n", n}, {"k", k}, {"mu", mu}, {"sigma", sigma},
                 {"decompose", decompose}, {"tol", tol}}));
  emit(doc, out_path, summary.str());
  return report.stoquastic ? kExitOk : kExitNegative;
}

int run_class(const CommonOpts& common, int x, int y, int sigma, int tau, int mu, double phi,
              std::optional<double> theta, int n, bool verify, double tol,
              const std::string& out_path) {
  const stoqbell::ClassParams params{x, y, mu, sigma, tau};
  params.validate();
  const double phi_rad = to_radians(phi, common.degrees);

  const auto matches = stoqbell::matching_angles(params, phi_rad);
  double theta_rad;
  if (theta) {
    theta_rad = to_radians(*theta, common.degrees);
  } else if (!matches.empty()) {
    theta_rad = matches.front();
  } else {
    throw UsageError("no matching theta exists for these parameters; pass --theta");
  }
  const stoqbell::MeasurementParamsd angles(phi_rad, theta_rad);

  const auto coeffs = stoqbell::class_to_coeffs<double>(params);
  const auto rep = verify ? stoqbell::verify_all_blocks(params, angles, n, tol)
                          : stoqbell::stoq_conditions(params, angles);

  nlohmann::json doc = stoqbell::to_json(rep);
  doc["alpha"] = stoqbell::detail::json_vector(coeffs.alpha);
  doc["theta"] = stoqbell::round_sig(theta_rad);
  nlohmann::json match_arr = nlohmann::json::array();
  for (double t : matches) match_arr.push_back(stoqbell::round_sig(t));
  doc["matching_thetas"] = match_arr;
  doc["parity_consistent"] = stoqbell::parity_consistent(params, n);
  doc["manifest"] = stoqbell::to_json(stoqbell::make_manifest(
      "class", {{"x", x}, {"y", y}, {"sigma", sigma}, {"tau", tau}, {"mu", mu},
                {"phi", phi_rad}, {"theta", theta_rad}, {"n", n}, {"verify", verify}}));

  const bool pass = verify ? rep.all_blocks_stoquastic()
                           : (rep.condition_A_met && rep.condition_C_met);
  std::ostringstream summary;
  if (verify)
    summary << (pass ? "all blocks stoquastic" : "stoquasticity fails in some block");
  else
    summary << "conditions " << (pass ? "met" : "not met");
  emit(doc, out_path, summary.str());
  return pass ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-invariant Bell operators in the Dicke basis: blocks, "
               "stoquasticity cones, bounds, and parent Hamiltonians"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_flag("--deg", common.degrees, "interpret all angles in degrees");
  app.add_option("--threads", common.threads,
                 "worker threads (0 = STOQBELL_THREADS or hardware)");

  std::string alpha_text, out_path, method = "dd", state_name, cone_path, ray_upper_text;
  double phi = 0, theta = 0, tol = 1e-9, stoq_tol = 1e-10;
  double phi_min = 0, phi_max = 0, theta_min = 0, theta_max = 0, mu = 0, gsigma = 1;
  double conv_tol = 0, line_upper = 0;
  int n = 0, order = 2, two_j_raw = -1, phi_points = 25, theta_points = 25, k = 0;
  int x = 1, y = 1, csigma = -1, ctau = -1, cmu = 0;
  int restarts = 8, grid_points = 101, max_passes = 24;
  std::uint64_t seed = 0;
  bool all_blocks = false, decompose = false, verify = false;
  double theta_opt = 0;
  bool theta_given = false;

  auto* op = app.add_subcommand("operator", "build one Dicke block and check stoquasticity");
  op->add_option("--alpha", alpha_text, "comma-separated coefficients (2, 5, or 9)")->required();
  op->add_option("--phi", phi, "first measurement angle")->required();
  op->add_option("--theta", theta, "second measurement angle");
  op->add_option("--n", n, "number of parties")->required();
  op->add_option("--two-j", two_j_raw, "block 2J (default n, the symmetric block)");
  op->add_option("--tol", stoq_tol, "stoquasticity tolerance");
  op->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* cn = app.add_subcommand("cone", "stoquasticity cone: hyperplanes, rays, lines");
  cn->add_option("--n", n, "number of parties")->required();
  cn->add_option("--K", order, "interaction order (2 or 3)")->required();
  cn->add_option("--phi", phi, "first measurement angle")->required();
  cn->add_option("--theta", theta, "second measurement angle")->required();
  cn->add_option("--method", method, "dd, combinatorial, or analytic (K=2)");
  cn->add_option("--tol", tol, "geometric tolerance");
  cn->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* bd = app.add_subcommand("bounds", "quantum and classical bounds plus their ratio");
  bd->add_option("--alpha", alpha_text, "comma-separated coefficients")->required();
  bd->add_option("--phi", phi, "first measurement angle")->required();
  bd->add_option("--theta", theta, "second measurement angle")->required();
  bd->add_option("--n", n, "number of parties")->required();
  bd->add_flag("--all-blocks", all_blocks, "minimize beta_q over every total-spin block");
  bd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* opt = app.add_subcommand("optimize", "coordinate-sweep search over a stored cone");
  opt->add_option("--cone-file", cone_path, "cone JSON written by the cone subcommand")
      ->required();
  opt->add_option("--seed", seed, "base RNG seed (restart t uses seed + t)");
  opt->add_option("--restarts", restarts, "number of seeded restarts");
  opt->add_option("--grid-points", grid_points, "grid points per coordinate sweep");
  opt->add_option("--max-passes", max_passes, "maximum sweep passes");
  opt->add_option("--tol", conv_tol, "convergence tolerance (0 = run all passes)");
  opt->add_option("--ray-upper", ray_upper_text, "ray interval uppers (single value or list)");
  opt->add_option("--line-upper", line_upper, "line interval half-width");
  opt->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* sc = app.add_subcommand("scan", "CSV violation scan over a rectangle of angles");
  sc->add_option("--alpha", alpha_text, "comma-separated coefficients")->required();
  sc->add_option("--n", n, "number of parties")->required();
  sc->add_option("--phi-min", phi_min, "lower phi")->required();
  sc->add_option("--phi-max", phi_max, "upper phi")->required();
  sc->add_option("--theta-min", theta_min, "lower theta")->required();
  sc->add_option("--theta-max", theta_max, "upper theta")->required();
  sc->add_option("--phi-points", phi_points, "phi resolution");
  sc->add_option("--theta-points", theta_points, "theta resolution");
  sc->add_option("--out", out_path, "write CSV here (manifest goes to .manifest.json)");

  auto* pa = app.add_subcommand("parent", "parent Hamiltonian of a nonnegative Dicke state");
  pa->add_option("--state", state_name, "ghz, uniform, basis, or gaussian")->required();
  pa->add_option("--n", n, "number of parties")->required();
  pa->add_option("--k", k, "excitation number for --state basis");
  pa->add_option("--mu", mu, "gaussian center");
  pa->add_option("--sigma", gsigma, "gaussian width parameter");
  pa->add_flag("--decompose", decompose, "extract permutation class coefficients (n <= 8)");
  pa->add_option("--tol", stoq_tol, "stoquasticity tolerance");
  pa->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* cl = app.add_subcommand("class", "tangent two-body inequality class");
  cl->add_option("--x", x, "scale parameter x >= 1")->required();
  cl->add_option("--y", y, "scale parameter y >= 1")->required();
  cl->add_option("--sigma", csigma, "sign sigma (+1 or -1)")->required();
  cl->add_option("--tau", ctau, "sign tau (+1 or -1)")->required();
  cl->add_option("--mu", cmu, "shift mu >= 0")->required();
  cl->add_option("--phi", phi, "first measurement angle")->required();
  cl->add_option("--theta", theta_opt, "second angle (default: first matching angle)");
  cl->add_option("--n", n, "number of parties")->required();
  cl->add_flag("--verify", verify, "check stoquasticity block by block");
  cl->add_option("--tol", tol, "stoquasticity tolerance");
  cl->add_option("--out", out_path, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
    theta_given = cl->count("--theta") > 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (op->parsed())
      return run_operator(common, alpha_text, phi, theta, n,
                          two_j_raw >= 0 ? std::optional<int>(two_j_raw) : std::nullopt, stoq_tol,
                          out_path);
    if (cn->parsed()) return run_cone(common, n, order, phi, theta, method, tol, out_path);
    if (bd->parsed()) return run_bounds(common, alpha_text, phi, theta, n, all_blocks, out_path);
    if (opt->parsed())
      return run_optimize(cone_path, seed, restarts, grid_points, max_passes, conv_tol,
                          line_upper, ray_upper_text, out_path);
    if (sc->parsed())
      return run_scan(common, alpha_text, n, phi_min, phi_max, theta_min, theta_max, phi_points,
                      theta_points, out_path);
    if (pa->parsed())
      return run_parent(common, state_name, n, k, mu, gsigma, decompose, stoq_tol, out_path);
    if (cl->parsed())
      return run_class(common, x, y, csigma, ctau, cmu, phi,
                       theta_given ? std::optional<double>(theta_opt) : std::nullopt, n, verify,
                       tol, out_path);
    std::cerr << "usage error: no subcommand given\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const stoqbell::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const stoqbell::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
