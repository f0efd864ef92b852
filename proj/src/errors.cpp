#include "dirsme/errors.hpp"

#include <cstdio>

namespace dirsme {

namespace {

std::string format_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

SingularW::SingularW(double min_eigenvalue, double threshold)
    : NumericalError("W is not positive definite (smallest eigenvalue " + format_g(min_eigenvalue) +
                     " <= threshold " + format_g(threshold) + ")"),
      min_eigenvalue_(min_eigenvalue),
      threshold_(threshold) {}

ZeroResultant::ZeroResultant(int column)
    : NumericalError(column < 0 ? std::string("mean resultant is numerically zero")
                                : "mean resultant of column " + std::to_string(column) +
                                      " is numerically zero"),
      column_(column) {}

DegenerateConcentration::DegenerateConcentration()
    : NumericalError("all observations coincide; concentration estimate is infinite") {}

NearDegenerate::NearDegenerate(double r)
    : NumericalError("mean resultant " + format_g(r) + " is too close to 1 to invert A1"), r_(r) {}

SamplerError::SamplerError(const std::string& sampler, double acceptance_rate)
    : NumericalError(sampler + " rejection sampler failed (acceptance rate " +
                     format_g(acceptance_rate) + ")"),
      rate_(acceptance_rate) {}

}  // namespace dirsme
