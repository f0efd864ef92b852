#include "dirsme/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirsme/errors.hpp"

namespace dirsme {

namespace {

// Above this the Hankel expansion is used instead of the continued fraction.
constexpr double kAsymptoticKappa = 1000.0;

// Above this nvar_*/are switch to their large-kappa series, avoiding the
// cancellation in 1 - A_1^2 - A_1/kappa.
constexpr double kSeriesKappa = 1e6;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// I_nu / I_{nu-1} = 1 / (2nu/k + 1 / (2(nu+1)/k + ...)), modified Lentz.
double ratio_continued_fraction(int nu, double kappa) {
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  for (int j = 0; j < 1000000; ++j) {
    const double b = 2.0 * (nu + j) / kappa;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 2.0 * kEps) break;
  }
  return f;
}

// sqrt(2 pi k) e^{-k} I_nu(k) by its asymptotic expansion, truncated at the
// smallest term.
double scaled_bessel_i_asymptotic(int nu, double kappa) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * kappa);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

Concentration::Concentration(double kappa) : kappa_(kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw ValidationError("concentration must be finite and nonnegative");
}

double bessel_ratio_step(int nu, Concentration kappa) {
  if (nu < 1) throw ValidationError("bessel_ratio_step needs nu >= 1");
  const double k = kappa.value();
  if (k == 0.0) return 0.0;
  if (k > kAsymptoticKappa)
    return scaled_bessel_i_asymptotic(nu, k) / scaled_bessel_i_asymptotic(nu - 1, k);
  return ratio_continued_fraction(nu, k);
}

double bessel_ratio(int nu, Concentration kappa) {
  if (nu < 0) throw ValidationError("bessel_ratio needs nu >= 0");
  if (nu == 0) return 1.0;
  const double k = kappa.value();
  if (k == 0.0) return 0.0;
  if (k > kAsymptoticKappa)
    return scaled_bessel_i_asymptotic(nu, k) / scaled_bessel_i_asymptotic(0, k);

  // r_nu from the continued fraction, then r_{j} = 1 / (2j/k + r_{j+1})
  // downwards; A_nu is the product r_1 ... r_nu.
  double r = ratio_continued_fraction(nu, k);
  double a = r;
  for (int j = nu - 1; j >= 1; --j) {
    r = 1.0 / (2.0 * j / k + r);
    a *= r;
  }
  return a;
}

double bessel_ratio_a1_derivative(Concentration kappa) {
  const double k = kappa.value();
  if (k == 0.0) return 0.5;
  const double a1 = bessel_ratio(1, k);
  return 1.0 - a1 * a1 - a1 / k;
}

Concentration inv_A1(double r) {
  if (!(r >= 0.0)) throw ValidationError("inv_A1 needs r >= 0");
  if (r >= 1.0) throw DegenerateConcentration();
  if (r == 0.0) return 0.0;
  if (bessel_ratio(1, kMaxInvA1Kappa) < r) throw NearDegenerate(r);

  double lo = 0.0;
  double hi = 1.0;
  while (bessel_ratio(1, hi) < r) {
    lo = hi;
    hi = std::min(2.0 * hi, kMaxInvA1Kappa);
  }

  // Starting guess from the small- and large-kappa approximations.
  double k = r < 0.53 ? 2.0 * r + r * r * r + 5.0 * std::pow(r, 5) / 6.0
                      : (r < 0.85 ? -0.4 + 1.39 * r + 0.43 / (1.0 - r)
                                  : 1.0 / (r * r * r - 4.0 * r * r + 3.0 * r));
  if (!(k > lo && k < hi)) k = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double a1 = bessel_ratio(1, k);
    const double f = a1 - r;
    if (f == 0.0) break;
    if (f < 0.0)
      lo = k;
    else
      hi = k;
    const double slope = 1.0 - a1 * a1 - a1 / k;
    double next = k - f / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 4.0 * kEps * k || hi - lo <= 4.0 * kEps * hi) {
      k = next;
      break;
    }
    k = next;
  }
  return k;
}

namespace {

// var(cos theta) = 1 - A_1^2 - A_1 / kappa loses about 2 kappa^2 ulps to
// cancellation; past kVarCosSeriesKappa the asymptotic series in 1/kappa is
// the more accurate of the two.
constexpr double kVarCosSeriesKappa = 150.0;

double var_cos(double k, double a1) {
  if (k <= kVarCosSeriesKappa) return 1.0 - a1 * a1 - a1 / k;
  const double t = 1.0 / k;
  return t * t *
         (0.5 + t * (0.25 + t * (0.375 + t * (25.0 / 32.0 + t * (65.0 / 32.0 + t * 3219.0 / 512.0)))));
}

}  // namespace

TrigMoments vm_trig_moments(Concentration kappa) {
  const double k = kappa.value();
  if (k == 0.0) return {0.5, 0.125, 0.0};
  const double a1 = bessel_ratio(1, k);
  const double a2 = bessel_ratio(2, k);
  const double a3 = bessel_ratio(3, k);
  const double a4 = bessel_ratio(4, k);
  return {
      var_cos(k, a1),
      (3.0 + a4 - 4.0 * a2) / 8.0 - a1 * a1 / (k * k),
      (a1 - a3) / 4.0 - a1 * a1 / k,
  };
}

double nvar_sme(Concentration kappa) {
  const double k = kappa.value();
  if (k == 0.0) return 2.0;
  if (k > kSeriesKappa) return 2.0 * k * k - k + 0.5 + 9.0 / (8.0 * k);
  const double a1 = bessel_ratio(1, k);
  return k * (2.0 * k - 3.0 * a1) / (a1 * a1);
}

double nvar_mle(Concentration kappa) {
  const double k = kappa.value();
  if (k == 0.0) return 2.0;
  return 1.0 / var_cos(k, bessel_ratio(1, k));
}

double are(Concentration kappa) {
  const double k = kappa.value();
  if (k == 0.0) return 1.0;
  if (k > kSeriesKappa) return nvar_mle(k) / nvar_sme(k);
  const double a1 = bessel_ratio(1, k);
  return a1 * a1 / ((2.0 * k - 3.0 * a1) * k * var_cos(k, a1));
}

}  // namespace dirsme
