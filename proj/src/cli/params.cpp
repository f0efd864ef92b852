#include "dirsme/cli/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "dirsme/errors.hpp"

namespace dirsme::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  const char* first = t.data();
  if (!t.empty() && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ValidationError(where + ": '" + t + "' is not a finite number");
  return v;
}

}  // namespace

ParamFile ParamFile::parse(std::istream& in, const std::string& source) {
  ParamFile p;
  p.source_ = source;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const std::string where = source + ": line " + std::to_string(line_no);
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (p.values_.count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
    p.values_[key] = trim(t.substr(eq + 1));
  }
  return p;
}

ParamFile ParamFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse(in, path);
}

double ParamFile::number(const std::string& key) const {
  const Eigen::VectorXd v = vector(key);
  if (v.size() != 1) throw ValidationError(source_ + ": '" + key + "' must be a single number");
  return v[0];
}

long ParamFile::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15)
    throw ValidationError(source_ + ": '" + key + "' must be an integer");
  return static_cast<long>(v);
}

Eigen::VectorXd ParamFile::vector(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError(source_ + ": missing key '" + key + "'");
  read_[key] = true;
  std::vector<double> xs;
  std::string::size_type start = 0;
  const std::string& text = it->second;
  for (;;) {
    const auto comma = text.find(',', start);
    xs.push_back(parse_double(text.substr(start, comma - start), source_ + ": '" + key + "'"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Eigen::MatrixXd ParamFile::matrix(const std::string& key, int rows, int cols) const {
  const Eigen::VectorXd v = vector(key);
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw ValidationError(source_ + ": '" + key + "' needs " + std::to_string(rows * cols) +
                          " entries (" + std::to_string(rows) + "x" + std::to_string(cols) +
                          ", row-major), found " + std::to_string(v.size()));
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = v[i * cols + j];
  return M;
}

std::vector<std::string> ParamFile::unused() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!read_.count(key)) out.push_back(key);
  return out;
}

VmfParams read_vmf_params(const ParamFile& p) {
  return {p.number("kappa"), UnitVector(p.vector("mu0"))};
}

BinghamParams read_bingham_params(const ParamFile& p) {
  const Eigen::VectorXd lambda = p.vector("lambda");
  const int q = static_cast<int>(lambda.size());
  BinghamParams out{Eigen::MatrixXd::Identity(q, q), lambda};
  if (p.has("Gamma")) out.Gamma = p.matrix("Gamma", q, q);
  out.validate();
  return out;
}

KentParams read_kent_params(const ParamFile& p) {
  KentParams out;
  out.kappa = p.number("kappa");
  out.beta = p.number("beta");
  if (p.has("Gamma")) out.Gamma = p.matrix("Gamma", 3, 3);
  out.validate();
  return out;
}

SineModelParams read_sine_params(const ParamFile& p) {
  const Eigen::VectorXd kappa = p.vector("kappa");
  const int k = static_cast<int>(kappa.size());
  SineModelParams out{Eigen::VectorXd::Zero(k), kappa, Eigen::MatrixXd::Zero(k, k)};
  if (p.has("theta0")) {
    out.theta0 = p.vector("theta0");
    if (out.theta0.size() != k) throw ValidationError("theta0 and kappa lengths differ");
  }
  if (p.has("Lambda")) out.Lambda = p.matrix("Lambda", k, k);
  out.validate();
  return out;
}

}  // namespace dirsme::cli
