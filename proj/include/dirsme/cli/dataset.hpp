#pragma once

// Comma-separated datasets: one observation per line, an optional header,
// and '#' comment lines.

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "dirsme/sme.hpp"

namespace dirsme::cli {

enum class DataFormat { UnitVectors, AnglesRadians, AnglesDegrees };

DataFormat parse_format(const std::string& name);
std::string format_name(DataFormat format);

// "sphere", "sphere:3", "torus", "torus:4". dim = 0 means "take it from
// the file".
struct DatasetKind {
  Geometry geometry = Geometry::Sphere;
  int dim = 0;
};

DatasetKind parse_kind(const std::string& name);
std::string kind_name(const DatasetKind& kind);

// Sphere values are unit-vector rows (n x q); angle input is accepted for
// sphere:2 and converted to (cos, sin). Torus values are radians in
// [0, 2 pi).
struct Dataset {
  DatasetKind kind;
  Eigen::MatrixXd values;
  std::string source;
  DataFormat format = DataFormat::UnitVectors;

  long rows() const { return static_cast<long>(values.rows()); }
};

// Unit vectors may be off by at most this much in norm before they are
// rejected; accepted rows are renormalized.
inline constexpr double kUnitNormTolerance = 1e-6;

Dataset parse_dataset(std::istream& in, const std::string& source, DataFormat format,
                      DatasetKind kind);
Dataset parse_dataset_file(const std::string& path, DataFormat format, DatasetKind kind);

// Writes the header line "z1,...,zq" or "theta1,...,thetak" and the rows
// with %.12g.
void write_dataset(std::ostream& out, const Dataset& data);

// printf("%.12g").
std::string format_number(double x);

}  // namespace dirsme::cli
