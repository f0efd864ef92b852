#pragma once

// Seedable random generation for every fitted model.
//
// A SeedSpec names one substream: the pair (master_seed, stream_id) fully
// determines the output, so Monte Carlo replicates can run in any order or
// on any thread and still reproduce bit for bit.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "dirsme/manifold.hpp"
#include "dirsme/models.hpp"
#include "dirsme/special.hpp"

namespace dirsme {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// splitmix64 finalizer applied to a ^ splitmix64(b). Used to derive
// per-cell master seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Variates are generated here rather than through <random> distributions,
// whose output is not specified across standard library implementations.
class Rng {
 public:
  explicit Rng(SeedSpec seed);

  std::uint64_t next() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Gamma(shape, 1), shape > 0.
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// One draw from vM(theta0, kappa) in [0, 2 pi).
double draw_vm(Rng& rng, double theta0, double kappa);

std::vector<double> sample_vm(double theta0, Concentration kappa, long n, SeedSpec seed);

// Rows are unit vectors. q = 2 goes through the von Mises sampler.
Eigen::MatrixXd sample_vmf(const UnitVector& mu0, Concentration kappa, long n, SeedSpec seed);

// Rejection from an angular central Gaussian envelope. Throws SamplerError
// if the acceptance rate collapses.
Eigen::MatrixXd sample_bingham(const BinghamParams& params, long n, SeedSpec seed);

// Rejection from the Bingham distribution that matches the Kent density's
// quadratic part.
Eigen::MatrixXd sample_kent(const KentParams& params, long n, SeedSpec seed);

struct GibbsOptions {
  long burnin = 500;
  long thin = 1;
};

// Gibbs sampler over the full von Mises conditionals, started at theta0.
// Returns n x k angles in [0, 2 pi).
Eigen::MatrixXd sample_sine(const SineModelParams& params, long n, SeedSpec seed,
                            GibbsOptions options = {});

}  // namespace dirsme
