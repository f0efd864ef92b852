#include "dirsme/cli/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "dirsme/errors.hpp"
#include "dirsme/manifold.hpp"

namespace dirsme::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_number(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  const char* first = t.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string row_label(long line_no) { return "line " + std::to_string(line_no); }

}  // namespace

DataFormat parse_format(const std::string& name) {
  if (name == "unit-vectors") return DataFormat::UnitVectors;
  if (name == "angles-radians") return DataFormat::AnglesRadians;
  if (name == "angles-degrees") return DataFormat::AnglesDegrees;
  throw ValidationError("unknown format '" + name +
                        "' (expected unit-vectors, angles-radians or angles-degrees)");
}

std::string format_name(DataFormat format) {
  switch (format) {
    case DataFormat::UnitVectors: return "unit-vectors";
    case DataFormat::AnglesRadians: return "angles-radians";
    case DataFormat::AnglesDegrees: return "angles-degrees";
  }
  return "unit-vectors";
}

DatasetKind parse_kind(const std::string& name) {
  const auto colon = name.find(':');
  const std::string base = name.substr(0, colon);
  DatasetKind kind;
  if (base == "sphere") kind.geometry = Geometry::Sphere;
  else if (base == "torus") kind.geometry = Geometry::Torus;
  else throw ValidationError("unknown kind '" + name + "' (expected sphere[:q] or torus[:k])");
  if (colon != std::string::npos) {
    const auto dim = to_number(name.substr(colon + 1));
    if (!dim || *dim != std::floor(*dim) || *dim < 1 || *dim > 1000)
      throw ValidationError("bad dimension in kind '" + name + "'");
    kind.dim = static_cast<int>(*dim);
    if (kind.geometry == Geometry::Sphere && kind.dim < 2)
      throw ValidationError("sphere kind needs q >= 2");
  }
  return kind;
}

std::string kind_name(const DatasetKind& kind) {
  std::string s = kind.geometry == Geometry::Sphere ? "sphere" : "torus";
  if (kind.dim > 0) s += ":" + std::to_string(kind.dim);
  return s;
}

Dataset parse_dataset(std::istream& in, const std::string& source, DataFormat format,
                      DatasetKind kind) {
  const bool angles = format != DataFormat::UnitVectors;
  if (kind.geometry == Geometry::Torus && !angles)
    throw ValidationError("torus data must be given as angles");
  if (kind.geometry == Geometry::Sphere && angles && kind.dim != 0 && kind.dim != 2)
    throw ValidationError("angle input on the sphere is only defined for sphere:2");

  std::vector<std::vector<double>> rows;
  std::vector<long> line_numbers;
  std::string line;
  long line_no = 0;
  bool seen_data = false;
  int columns = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t);
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = to_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (!seen_data) {
        seen_data = true;  // header
        continue;
      }
      throw ValidationError(source + ": " + row_label(line_no) + ": malformed row '" + t + "'");
    }
    seen_data = true;
    if (columns < 0) columns = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != columns)
      throw ValidationError(source + ": " + row_label(line_no) + ": expected " +
                            std::to_string(columns) + " columns, found " +
                            std::to_string(values.size()));
    rows.push_back(std::move(values));
    line_numbers.push_back(line_no);
  }
  if (in.bad()) throw ValidationError(source + ": read error");
  if (rows.empty()) throw ValidationError(source + ": no data rows");

  int expected = kind.dim;
  if (kind.geometry == Geometry::Sphere && angles) expected = 1;
  if (expected > 0 && columns != expected)
    throw ValidationError(source + ": " + kind_name(kind) + " with format " +
                          format_name(format) + " needs " + std::to_string(expected) +
                          " columns, found " + std::to_string(columns));
  if (kind.geometry == Geometry::Sphere && !angles && columns < 2)
    throw ValidationError(source + ": sphere data need at least 2 columns");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const double scale = format == DataFormat::AnglesDegrees ? std::numbers::pi / 180.0 : 1.0;
  Dataset data;
  data.source = source;
  data.format = format;
  data.kind = kind;

  if (kind.geometry == Geometry::Torus) {
    data.kind.dim = columns;
    data.values.resize(n, columns);
    for (Eigen::Index h = 0; h < n; ++h)
      for (int j = 0; j < columns; ++j) data.values(h, j) = wrap_angle(scale * rows[h][j]);
    return data;
  }

  if (angles) {
    data.kind.dim = 2;
    data.values.resize(n, 2);
    for (Eigen::Index h = 0; h < n; ++h) {
      const double t = scale * rows[h][0];
      data.values(h, 0) = std::cos(t);
      data.values(h, 1) = std::sin(t);
    }
    return data;
  }

  data.kind.dim = columns;
  data.values.resize(n, columns);
  std::vector<long> bad;
  for (Eigen::Index h = 0; h < n; ++h) {
    Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(rows[h].data(), columns);
    const double norm = z.norm();
    if (std::abs(norm - 1.0) > kUnitNormTolerance) {
      bad.push_back(line_numbers[h]);
      continue;
    }
    data.values.row(h) = z.transpose() / norm;
  }
  if (!bad.empty()) {
    std::string msg = source + ": rows are not unit vectors (tolerance 1e-6) at line";
    msg += bad.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < bad.size() && i < 10; ++i) {
      if (i) msg += ", ";
      msg += std::to_string(bad[i]);
    }
    if (bad.size() > 10) msg += ", ... (" + std::to_string(bad.size()) + " in total)";
    throw ValidationError(msg);
  }
  return data;
}

Dataset parse_dataset_file(const std::string& path, DataFormat format, DatasetKind kind) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse_dataset(in, path, format, kind);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  const auto cols = data.values.cols();
  const char* prefix = data.kind.geometry == Geometry::Sphere ? "z" : "theta";
  for (Eigen::Index j = 0; j < cols; ++j) out << (j ? "," : "") << prefix << (j + 1);
  out << '\n';
  for (Eigen::Index h = 0; h < data.values.rows(); ++h) {
    for (Eigen::Index j = 0; j < cols; ++j)
      out << (j ? "," : "") << format_number(data.values(h, j));
    out << '\n';
  }
}

}  // namespace dirsme::cli
