#include "dirsme/cli/report.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "dirsme/errors.hpp"

namespace dirsme::cli {

namespace {

using nlohmann::json;

// Scalars are written as numbers and column vectors as flat arrays.
json matrix_to_json(const Eigen::MatrixXd& M) {
  if (M.size() == 1) return M(0, 0);
  if (M.cols() == 1) {
    json col = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) col.push_back(M(i, 0));
    return col;
  }
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ValidationError("expected a nonempty matrix");
  if (j[0].is_number()) {
    Eigen::MatrixXd col(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) col(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    return col;
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
      throw ValidationError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  }
  return M;
}

// JSON has no infinity; a singular W reports its condition number as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double finite_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json named_matrices(const std::map<std::string, Eigen::MatrixXd>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = matrix_to_json(v);
  return out;
}

std::map<std::string, Eigen::MatrixXd> named_matrices_from(const json& j) {
  std::map<std::string, Eigen::MatrixXd> out;
  for (const auto& [k, v] : j.items()) out[k] = matrix_from_json(v);
  return out;
}

bool same(const std::map<std::string, Eigen::MatrixXd>& a,
          const std::map<std::string, Eigen::MatrixXd>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    if (it == b.end() || it->second.rows() != v.rows() || it->second.cols() != v.cols() ||
        it->second != v)
      return false;
  }
  return true;
}

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

double FitReport::scalar(const std::string& key) const {
  for (const auto* m : {&concentration, &orientation}) {
    const auto it = m->find(key);
    if (it != m->end() && it->second.size() == 1) return it->second(0, 0);
  }
  throw ValidationError("report has no scalar '" + key + "'");
}

bool operator==(const FitReport& a, const FitReport& b) {
  return a.model == b.model && a.estimator == b.estimator && a.kind == b.kind && a.n == b.n &&
         a.angle_unit == b.angle_unit && same(a.orientation, b.orientation) &&
         same(a.concentration, b.concentration) && same_double(a.w_condition, b.w_condition) &&
         same_double(a.w_min_eigenvalue, b.w_min_eigenvalue) &&
         same_double(a.w_threshold, b.w_threshold) && a.warnings == b.warnings &&
         a.provenance == b.provenance;
}

std::string to_json(const FitReport& r) {
  json j;
  j["model"] = r.model;
  j["estimator"] = r.estimator;
  j["kind"] = r.kind;
  j["n"] = r.n;
  j["angle_unit"] = r.angle_unit;
  j["orientation"] = named_matrices(r.orientation);
  j["concentration"] = named_matrices(r.concentration);
  j["w"] = {{"condition_number", finite_or_null(r.w_condition)},
            {"min_eigenvalue", r.w_min_eigenvalue},
            {"pd_threshold", r.w_threshold}};
  j["warnings"] = r.warnings;
  json prov = {{"version", r.provenance.version}, {"args", r.provenance.args}};
  prov["seed"] = r.provenance.seed ? json(*r.provenance.seed) : json(nullptr);
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

FitReport fit_report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FitReport r;
    r.model = j.at("model").get<std::string>();
    r.estimator = j.at("estimator").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.n = j.at("n").get<long>();
    r.angle_unit = j.at("angle_unit").get<std::string>();
    r.orientation = named_matrices_from(j.at("orientation"));
    r.concentration = named_matrices_from(j.at("concentration"));
    const json& w = j.at("w");
    r.w_condition = finite_or_inf(w.at("condition_number"));
    r.w_min_eigenvalue = w.at("min_eigenvalue").get<double>();
    r.w_threshold = w.at("pd_threshold").get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    const json& p = j.at("provenance");
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.args = p.at("args").get<std::vector<std::string>>();
    if (!p.at("seed").is_null()) r.provenance.seed = p.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed fit report: ") + e.what());
  }
}

}  // namespace dirsme::cli
