#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stoqbell/block_matrix.hpp"
#include "stoqbell/bounds.hpp"
#include "stoqbell/cone.hpp"
#include "stoqbell/errors.hpp"
#include "stoqbell/optimize.hpp"
#include "stoqbell/parent.hpp"
#include "stoqbell/two_body_class.hpp"
#include "stoqbell/types.hpp"
#include "stoqbell/version.hpp"

namespace stoqbell {

// All floating-point output is rounded to 12 significant digits so files
// are reproducible across platforms and diffable.
inline double round_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline nlohmann::json json_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(round_sig(v[i]));
  return arr;
}

inline nlohmann::json json_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) arr.push_back(json_vector(m.row(r).transpose()));
  return arr;
}

inline Eigen::MatrixXd parse_matrix(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array()) throw DomainError(std::string(what) + ": expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(arr.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = arr[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw DomainError(std::string(what) + ": expected an array of rows");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw DomainError(std::string(what) + ": ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  if (rows == 0) m.resize(0, 0);
  return m;
}

// Deterministic row order for ray listings: lexicographic on the rows
// rounded to 6 decimals, so reordering noise in the double description
// cannot leak into the file.
inline Eigen::MatrixXd sort_rows_lex6(const Eigen::MatrixXd& m) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  const auto key = [&](Eigen::Index r, Eigen::Index c) {
    return std::round(m(r, c) * 1e6) / 1e6;
  };
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double ka = key(a, c), kb = key(b, c);
      if (ka != kb) return ka < kb;
    }
    return a < b;
  });
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(order[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace detail

// Provenance block attached to every file the tools write.
struct RunManifest {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::string tool_version = version;
  std::optional<std::uint64_t> seed;
  std::string timestamp;  // ISO 8601 UTC
};

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunManifest make_manifest(std::string command, nlohmann::json params,
                                 std::optional<std::uint64_t> seed = std::nullopt) {
  RunManifest m;
  m.command = std::move(command);
  m.params = std::move(params);
  m.seed = seed;
  m.timestamp = utc_timestamp();
  return m;
}

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j{{"command", m.command},
                   {"params", m.params},
                   {"version", m.tool_version},
                   {"timestamp", m.timestamp}};
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const SymmetricBlockMatrixd& block) {
  nlohmann::json bands = nlohmann::json::array();
  for (int d = 0; d <= block.bandwidth(); ++d) bands.push_back(detail::json_vector(block.bands[d]));
  return {{"dim", block.dim()}, {"bands", bands}};
}

inline nlohmann::json to_json(const StoqReportd& rep) {
  return {{"stoquastic", rep.stoquastic},
          {"worst_d", rep.worst_d},
          {"worst_k", rep.worst_k},
          {"worst_value", round_sig(rep.worst_value)},
          {"tolerance", round_sig(rep.tolerance)}};
}

inline nlohmann::json to_json(const ConeDescriptiond& cone) {
  return {{"n", cone.n},
          {"K", cone.order},
          {"phi", round_sig(cone.params.phi)},
          {"theta", round_sig(cone.params.theta)},
          {"hyperplanes", detail::json_matrix(cone.hyperplanes.rows)},
          {"rays", detail::json_matrix(detail::sort_rows_lex6(cone.rays))},
          {"lines", detail::json_matrix(cone.lines)},
          {"tolerance", round_sig(cone.tolerance)}};
}

// Inverse of to_json(ConeDescription); unknown keys are ignored so wrapped
// documents round-trip. Hyperplane labels are not serialized; membership
// and sweeping only need the rows.
inline ConeDescriptiond parse_cone_json(const nlohmann::json& j) {
  ConeDescriptiond cone;
  try {
    cone.n = j.at("n").get<int>();
    cone.order = j.at("K").get<int>();
    cone.params = MeasurementParamsd(j.at("phi").get<double>(), j.at("theta").get<double>());
    cone.hyperplanes.rows = detail::parse_matrix(j.at("hyperplanes"), "cone hyperplanes");
    cone.rays = detail::parse_matrix(j.at("rays"), "cone rays");
    cone.lines = detail::parse_matrix(j.at("lines"), "cone lines");
    cone.tolerance = j.at("tolerance").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("cone json: ") + e.what());
  }
  const Eigen::Index want = coefficient_count(cone.order);
  if (cone.rays.cols() != want && cone.rays.rows() > 0)
    throw DomainError("cone json: ray width does not match K");
  if (cone.lines.cols() != want && cone.lines.rows() > 0)
    throw DomainError("cone json: line width does not match K");
  if (cone.rays.rows() == 0) cone.rays.resize(0, want);
  if (cone.lines.rows() == 0) cone.lines.resize(0, want);
  return cone;
}

inline nlohmann::json to_json(const BoundsReportd& rep) {
  nlohmann::json j{{"beta_q", round_sig(rep.beta_q)},
                   {"beta_c", round_sig(rep.beta_c)},
                   {"strategy",
                    {{"a", rep.strategy.a},
                     {"b", rep.strategy.b},
                     {"c", rep.strategy.c},
                     {"d", rep.strategy.d}}},
                   {"ground_state", detail::json_vector(rep.ground_state)}};
  j["gap"] = rep.gap ? nlohmann::json(round_sig(*rep.gap)) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const SweepResultd& run) {
  nlohmann::json coords = nlohmann::json::array();
  for (Eigen::Index i = 0; i < run.coords.ray_weights.size(); ++i)
    coords.push_back(round_sig(run.coords.ray_weights[i]));
  for (Eigen::Index i = 0; i < run.coords.line_weights.size(); ++i)
    coords.push_back(round_sig(run.coords.line_weights[i]));
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : run.trace) {
    nlohmann::json row = {e.pass, e.coord, round_sig(e.value)};
    row.push_back(e.gap ? nlohmann::json(round_sig(*e.gap)) : nlohmann::json(nullptr));
    trace.push_back(std::move(row));
  }
  nlohmann::json j{{"status", run.status == SweepStatus::ok ? "ok" : "no_violation_found"},
                   {"coords", coords},
                   {"alpha", detail::json_vector(run.alpha.alpha)},
                   {"trace", trace},
                   {"seed", run.seed}};
  j["gap"] = run.gap ? nlohmann::json(round_sig(*run.gap)) : nlohmann::json(nullptr);
  j["beta_q"] = round_sig(run.beta_q);
  return j;
}

inline nlohmann::json to_json(const std::vector<PauliWeightTermd>& terms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms)
    arr.push_back({{"w", {t.w[0], t.w[1], t.w[2]}},
                   {"K", t.order()},
                   {"coeff", round_sig(t.coefficient)}});
  return arr;
}

inline nlohmann::json to_json(const ClassConditionReportd& rep) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : rep.per_block) {
    nlohmann::json jb = to_json(b.report);
    jb["two_j"] = b.two_j;
    blocks.push_back(std::move(jb));
  }
  return {{"A_prime", round_sig(rep.A_prime)},
          {"C", round_sig(rep.C)},
          {"D", round_sig(rep.D)},
          {"condition_A_met", rep.condition_A_met},
          {"condition_C_met", rep.condition_C_met},
          {"per_block", blocks},
          {"all_blocks_stoquastic", rep.all_blocks_stoquastic()}};
}

// CSV with a fixed header; the gap field is left empty when the classical
// bound is nonnegative. Output is bitwise reproducible for fixed inputs.
inline void write_scan_csv(const std::vector<ScanRowd>& rows, std::ostream& out) {
  out << "phi,theta,beta_q,beta_c,gap,violation\n";
  char buf[200];
  for (const auto& r : rows) {
    if (r.gap)
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", r.phi, r.theta,
                    r.beta_q, r.beta_c, *r.gap, r.violation ? 1 : 0);
    else
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,,%d\n", r.phi, r.theta, r.beta_q,
                    r.beta_c, r.violation ? 1 : 0);
    out << buf;
  }
}

}  // namespace stoqbell
