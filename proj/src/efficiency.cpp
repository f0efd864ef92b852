#include "dirsme/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "dirsme/errors.hpp"

namespace dirsme {

namespace {

constexpr double kEdge = 1e-12;

struct Replicate {
  bool ok = false;
  double sme = 0.0;
  double mle = 0.0;
};

// Draws one dataset and returns both estimates of kappa.
Replicate run_replicate(Rng& rng, double kappa, long n, std::vector<double>& theta) {
  double c = 0.0, s = 0.0;
  for (long h = 0; h < n; ++h) {
    theta[h] = draw_vm(rng, 0.0, kappa);
    c += std::cos(theta[h]);
    s += std::sin(theta[h]);
  }
  const auto nd = static_cast<double>(n);
  const double rbar = std::hypot(c, s) / nd;
  if (rbar <= kEdge || rbar >= 1.0 - kEdge) return {};
  const double theta0 = std::atan2(s, c);
  double sin2 = 0.0;
  for (long h = 0; h < n; ++h) {
    const double sd = std::sin(theta[h] - theta0);
    sin2 += sd * sd;
  }
  if (sin2 / nd < kEdge) return {};
  Replicate out;
  out.sme = nd * rbar / sin2;
  try {
    out.mle = inv_A1(rbar);
  } catch (const NearDegenerate&) {
    return {};
  }
  out.ok = true;
  return out;
}

int resolve_threads(int threads, long reps) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<long>(threads, std::max(1L, reps / 256)));
}

// Runs every replicate into its own slot, so the later reduction is in a
// fixed order whatever the schedule.
std::vector<Replicate> run_replicates(double kappa, long n, long reps, SeedSpec seed,
                                      int threads) {
  if (n < 2) throw ValidationError("efficiency study needs n >= 2");
  if (reps < 1) throw ValidationError("efficiency study needs reps >= 1");
  std::vector<Replicate> out(static_cast<std::size_t>(reps));
  const std::uint64_t stream_master = mix_seed(seed.master_seed, seed.stream_id);

  auto work = [&](long begin, long end) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (long r = begin; r < end; ++r) {
      Rng rng(SeedSpec{stream_master, static_cast<std::uint64_t>(r)});
      out[r] = run_replicate(rng, kappa, n, theta);
    }
  };

  const int t = resolve_threads(threads, reps);
  if (t == 1) {
    work(0, reps);
    return out;
  }
  std::vector<std::thread> pool;
  const long chunk = (reps + t - 1) / t;
  for (int i = 0; i < t; ++i) {
    const long begin = i * chunk;
    const long end = std::min(reps, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

PairEstimates kappa_estimates_n2(double theta) {
  if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
    throw ValidationError("kappa_estimates_n2 needs 0 < theta < pi/2");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c / (s * s), inv_A1(c)};
}

std::vector<GapPoint> gap_curve(double grid_step) {
  if (!(grid_step > 0.0 && grid_step < 0.5)) throw ValidationError("grid step must be in (0, 0.5)");
  std::vector<GapPoint> out;
  for (long i = 1;; ++i) {
    const double r = static_cast<double>(i) * grid_step;
    if (r > 1.0 - grid_step + 1e-15) break;
    out.push_back({r, r / ((1.0 - r) * (1.0 + r)), inv_A1(r)});
  }
  return out;
}

GapScan max_gap_scan(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3))
    throw ValidationError("max_gap_scan needs 0 < grid_step <= 1e-3");
  GapScan best{0.0, -1.0};
  for (const auto& p : gap_curve(grid_step)) {
    if (p.mle - p.sme > best.gap) best = {p.rbar, p.mle - p.sme};
  }
  return best;
}

EfficiencyReport mc_relative_efficiency(Concentration kappa, long n, long reps, SeedSpec seed,
                                        int threads) {
  if (!(kappa.value() > 0.0)) throw ValidationError("efficiency study needs kappa > 0");
  if (reps < 1000) throw ValidationError("efficiency study needs reps >= 1000");
  const auto reps_out = run_replicates(kappa, n, reps, seed, threads);

  EfficiencyReport rep;
  rep.kappa = kappa;
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  const double logk = std::log(kappa.value());
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0, raw_a = 0, raw_b = 0;
  for (const auto& r : reps_out) {
    if (!r.ok) {
      ++rep.excluded;
      continue;
    }
    const double ea = std::log(r.mle) - logk;
    const double eb = std::log(r.sme) - logk;
    const double a = ea * ea, b = eb * eb;
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
    raw_a += (r.mle - kappa) * (r.mle - kappa);
    raw_b += (r.sme - kappa) * (r.sme - kappa);
    ++rep.used;
  }
  if (rep.used < 2) throw NumericalError("too few usable replicates");
  const auto m = static_cast<double>(rep.used);
  const double ma = sa / m, mb = sb / m;
  rep.mse_mle_logk = ma;
  rep.mse_sme_logk = mb;
  rep.mse_mle = raw_a / m;
  rep.mse_sme = raw_b / m;
  rep.ratio_pct = 100.0 * ma / mb;

  // Delta method for a ratio of paired means.
  const double va = saa / m - ma * ma;
  const double vb = sbb / m - mb * mb;
  const double cab = sab / m - ma * mb;
  const double var_ratio = (va / (mb * mb) - 2.0 * ma * cab / (mb * mb * mb) +
                            ma * ma * vb / (mb * mb * mb * mb)) /
                           m;
  rep.ci_halfwidth = 100.0 * 1.959963984540054 * std::sqrt(std::max(var_ratio, 0.0));
  return rep;
}

std::vector<EfficiencyReport> efficiency_grid(const std::vector<double>& kappas,
                                              const std::vector<long>& ns, long reps,
                                              std::uint64_t master_seed, int threads) {
  std::vector<EfficiencyReport> out;
  out.reserve(kappas.size() * ns.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const SeedSpec seed{master_seed, static_cast<std::uint64_t>(i * ns.size() + j)};
      out.push_back(mc_relative_efficiency(kappas[i], ns[j], reps, seed, threads));
    }
  }
  return out;
}

VarianceReport mc_asymptotic_variance(Concentration kappa, long n, long reps, SeedSpec seed,
                                      int threads) {
  if (!(kappa.value() > 0.0)) throw ValidationError("variance study needs kappa > 0");
  if (reps < 2) throw ValidationError("variance study needs reps >= 2");
  const auto reps_out = run_replicates(kappa, n, reps, seed, threads);
  VarianceReport rep;
  rep.kappa = kappa;
  rep.n = n;
  // Two passes about the sample means.
  double ma = 0, mb = 0;
  for (const auto& r : reps_out) {
    if (!r.ok) {
      ++rep.excluded;
      continue;
    }
    ma += r.sme;
    mb += r.mle;
    ++rep.used;
  }
  if (rep.used < 2) throw NumericalError("too few usable replicates");
  const auto m = static_cast<double>(rep.used);
  ma /= m;
  mb /= m;
  double va = 0, vb = 0;
  for (const auto& r : reps_out) {
    if (!r.ok) continue;
    va += (r.sme - ma) * (r.sme - ma);
    vb += (r.mle - mb) * (r.mle - mb);
  }
  rep.nvar_sme = static_cast<double>(n) * va / (m - 1.0);
  rep.nvar_mle = static_cast<double>(n) * vb / (m - 1.0);
  return rep;
}

std::vector<AreRow> are_table(const std::vector<double>& kappas) {
  std::vector<AreRow> out;
  out.reserve(kappas.size());
  for (double k : kappas) {
    if (!(k > 0.0)) throw ValidationError("are_table needs kappa > 0");
    out.push_back({k, are(k)});
  }
  return out;
}

std::vector<AreRow> are_grid(double kmin, double kmax, int steps, bool log_spacing) {
  if (!(kmin > 0.0 && kmin < kmax && std::isfinite(kmax)))
    throw ValidationError("are grid needs 0 < kmin < kmax");
  if (steps < 2) throw ValidationError("are grid needs at least 2 steps");
  std::vector<double> kappas(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    kappas[i] = log_spacing ? std::exp(std::log(kmin) + t * (std::log(kmax) - std::log(kmin)))
                            : kmin + t * (kmax - kmin);
  }
  kappas.back() = kmax;
  return are_table(kappas);
}

}  // namespace dirsme
