#pragma once

// Flat "key = value" parameter files for the simulate command.
//
//   # vMF on S_2
//   mu0 = 0, 0, 1
//   kappa = 5
//
// Vectors are comma separated; matrices are given row-major and reshaped
// by the reader, which knows the expected shape.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirsme/models.hpp"

namespace dirsme::cli {

class ParamFile {
 public:
  static ParamFile parse(std::istream& in, const std::string& source);
  static ParamFile load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double number(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  Eigen::VectorXd vector(const std::string& key) const;
  Eigen::MatrixXd matrix(const std::string& key, int rows, int cols) const;

  // Keys never read by the caller; reported as a typo guard.
  std::vector<std::string> unused() const;

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

VmfParams read_vmf_params(const ParamFile& p);
BinghamParams read_bingham_params(const ParamFile& p);
KentParams read_kent_params(const ParamFile& p);
SineModelParams read_sine_params(const ParamFile& p);

}  // namespace dirsme::cli
