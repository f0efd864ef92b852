#pragma once

// Score matching versus maximum likelihood for the von Mises concentration:
// closed forms at n = 2, a Monte Carlo study of mean squared error on the
// log scale, and the asymptotic relative efficiency curve.

#include <cstdint>
#include <vector>

#include "dirsme/samplers.hpp"
#include "dirsme/special.hpp"

namespace dirsme {

struct PairEstimates {
  double sme;
  double mle;
};

// Two angles at +-theta about the mean: R = cos theta, so
// sme = cos theta / sin^2 theta and mle = inv_A1(cos theta).
// Requires 0 < theta < pi/2.
PairEstimates kappa_estimates_n2(double theta);

struct GapPoint {
  double rbar;
  double sme;
  double mle;
};

// R = step, 2 step, ... while R <= 1 - step.
std::vector<GapPoint> gap_curve(double grid_step);

struct GapScan {
  double rbar_star;  // argmax of mle - sme
  double gap;
};

// Requires 0 < grid_step <= 1e-3.
GapScan max_gap_scan(double grid_step);

struct EfficiencyReport {
  double kappa = 0.0;
  long n = 0;
  long reps = 0;
  long used = 0;      // reps - excluded
  long excluded = 0;  // degenerate replicates
  double mse_sme_logk = 0.0;
  double mse_mle_logk = 0.0;
  double mse_sme = 0.0;  // raw kappa scale, diagnostics only
  double mse_mle = 0.0;
  double ratio_pct = 0.0;     // 100 mse_mle_logk / mse_sme_logk
  double ci_halfwidth = 0.0;  // 95%, percentage points
  SeedSpec seed;
};

// Replicate r draws from the substream
// (mix_seed(seed.master_seed, seed.stream_id), r). Results do not depend on
// the thread count; threads = 0 uses the hardware concurrency.
//
// A replicate is excluded when its resultant is within 1e-12 of 0 or 1,
// when the score matching denominator sum sin^2 / n is below 1e-12, or when
// inv_A1 would exceed kMaxInvA1Kappa.
EfficiencyReport mc_relative_efficiency(Concentration kappa, long n, long reps, SeedSpec seed,
                                        int threads = 0);

// Cell (i, j) of the kappas x ns grid uses stream_id i * ns.size() + j.
std::vector<EfficiencyReport> efficiency_grid(const std::vector<double>& kappas,
                                              const std::vector<long>& ns, long reps,
                                              std::uint64_t master_seed, int threads = 0);

struct VarianceReport {
  double kappa = 0.0;
  long n = 0;
  long used = 0;
  long excluded = 0;
  double nvar_sme = 0.0;  // n * sample variance of the estimates
  double nvar_mle = 0.0;
};

// Monte Carlo counterpart of nvar_sme / nvar_mle.
VarianceReport mc_asymptotic_variance(Concentration kappa, long n, long reps, SeedSpec seed,
                                      int threads = 0);

struct AreRow {
  double kappa;
  double are;
};

std::vector<AreRow> are_table(const std::vector<double>& kappas);

// Exactly steps rows from kmin to kmax, linear or geometric spacing.
std::vector<AreRow> are_grid(double kmin, double kmax, int steps, bool log_spacing = false);

}  // namespace dirsme
