#pragma once

// Ratios of modified Bessel functions A_nu(kappa) = I_nu(kappa) / I_0(kappa)
// and the von Mises variance and efficiency formulas built on them.

namespace dirsme {

// A nonnegative, finite von Mises concentration. Conversion from double
// validates and throws ValidationError on negative or non-finite input.
class Concentration {
 public:
  Concentration(double kappa);  // NOLINT(google-explicit-constructor)

  double value() const { return kappa_; }
  operator double() const { return kappa_; }  // NOLINT(google-explicit-constructor)

 private:
  double kappa_;
};

// Largest concentration inv_A1 will return.
inline constexpr double kMaxInvA1Kappa = 1e6;

// I_nu(kappa) / I_{nu-1}(kappa), nu >= 1.
double bessel_ratio_step(int nu, Concentration kappa);

// A_nu(kappa) = I_nu(kappa) / I_0(kappa), nu >= 0. A_0 = 1.
double bessel_ratio(int nu, Concentration kappa);

// d A_1 / d kappa = 1 - A_1^2 - A_1 / kappa.
double bessel_ratio_a1_derivative(Concentration kappa);

// Solves A_1(kappa) = r for 0 <= r < 1. Throws ValidationError for r < 0,
// DegenerateConcentration for r >= 1 and NearDegenerate when the root lies
// beyond kMaxInvA1Kappa.
Concentration inv_A1(double r);

// Trigonometric moments of theta ~ vM(0, kappa).
struct TrigMoments {
  double var_cos = 0.0;   // var(cos theta)
  double var_sin2 = 0.0;  // var(sin^2 theta)
  double cov = 0.0;       // cov(cos theta, sin^2 theta)
};

TrigMoments vm_trig_moments(Concentration kappa);

// Asymptotic n * var of the hybrid score matching estimator of kappa:
// kappa (2 kappa - 3 A_1) / A_1^2.
double nvar_sme(Concentration kappa);

// Asymptotic n * var of the maximum likelihood estimator of kappa:
// 1 / (1 - A_1^2 - A_1 / kappa).
double nvar_mle(Concentration kappa);

// Asymptotic efficiency of score matching relative to maximum likelihood,
// nvar_mle / nvar_sme. Tends to 1 at both ends of the kappa range.
double are(Concentration kappa);

}  // namespace dirsme
