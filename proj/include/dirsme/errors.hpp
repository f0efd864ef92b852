#pragma once

#include <stdexcept>
#include <string>

namespace dirsme {

// Bad input: wrong dimensions, out-of-domain arguments, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The data or parameters are valid but the computation is degenerate.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// W is not numerically positive definite; too few points or degenerate data.
class SingularW : public NumericalError {
 public:
  SingularW(double min_eigenvalue, double threshold);

  double min_eigenvalue() const { return min_eigenvalue_; }
  double threshold() const { return threshold_; }

 private:
  double min_eigenvalue_;
  double threshold_;
};

// The sample mean direction is numerically zero, so orientation is
// unidentifiable. column() is the offending torus coordinate, or -1.
class ZeroResultant : public NumericalError {
 public:
  explicit ZeroResultant(int column = -1);

  int column() const { return column_; }

 private:
  int column_;
};

// All mass sits at a single point; the concentration estimate is +infinity.
class DegenerateConcentration : public NumericalError {
 public:
  DegenerateConcentration();
};

// Mean resultant so close to 1 that A1^{-1} exceeds the supported range.
class NearDegenerate : public NumericalError {
 public:
  explicit NearDegenerate(double r);

  double resultant() const { return r_; }

 private:
  double r_;
};

// A rejection sampler failed to accept enough proposals.
class SamplerError : public NumericalError {
 public:
  SamplerError(const std::string& sampler, double acceptance_rate);

  double acceptance_rate() const { return rate_; }

 private:
  double rate_;
};

}  // namespace dirsme
