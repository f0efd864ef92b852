#pragma once

// Fit reports, serialized as JSON. Doubles are written with enough digits
// to round-trip exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dirsme::cli {

struct Provenance {
  std::string version;
  std::vector<std::string> args;  // command line, program name excluded
  std::optional<std::uint64_t> seed;

  bool operator==(const Provenance&) const = default;
};

struct FitReport {
  std::string model;      // vmf | bingham | kent | fisher-bingham | sine
  std::string estimator;  // hybrid-sme | full-sme
  std::string kind;       // sphere:q | torus:k
  long n = 0;
  std::string angle_unit = "radians";
  // Named estimates; scalars are 1 x 1, vectors are columns.
  std::map<std::string, Eigen::MatrixXd> orientation;
  std::map<std::string, Eigen::MatrixXd> concentration;
  double w_condition = 0.0;
  double w_min_eigenvalue = 0.0;
  double w_threshold = 0.0;
  std::vector<std::string> warnings;
  Provenance provenance;

  double scalar(const std::string& key) const;
};

bool operator==(const FitReport& a, const FitReport& b);

std::string to_json(const FitReport& report);
// Throws ValidationError on malformed input.
FitReport fit_report_from_json(const std::string& text);

}  // namespace dirsme::cli
