#include "dirsme/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirsme/errors.hpp"

namespace dirsme {

namespace {

constexpr double kPi = std::numbers::pi;

// Give up when fewer than one proposal in this many is accepted.
constexpr double kMinAcceptance = 1e-4;
constexpr long kMinAttemptsBeforeGivingUp = 100000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_count(long n) {
  if (n < 0) throw ValidationError("sample size must be nonnegative");
}

class AcceptanceMonitor {
 public:
  explicit AcceptanceMonitor(const char* name) : name_(name) {}

  void record(bool accepted) {
    ++attempts_;
    if (accepted) ++accepted_;
    if (attempts_ >= kMinAttemptsBeforeGivingUp &&
        static_cast<double>(accepted_) < kMinAcceptance * static_cast<double>(attempts_))
      throw SamplerError(name_, static_cast<double>(accepted_) / static_cast<double>(attempts_));
  }

 private:
  const char* name_;
  long attempts_ = 0;
  long accepted_ = 0;
};

// Uniform direction on S^{dim-1}.
Eigen::VectorXd uniform_direction(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  while (norm < 1e-300) {
    for (int j = 0; j < dim; ++j) v[j] = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

// Component W = mu0^T z of a vMF(kappa) draw on S^{q-1}.
double draw_vmf_cosine(Rng& rng, int q, double kappa, AcceptanceMonitor& monitor) {
  if (q == 3) {
    // Exact inverse CDF of the density proportional to exp(kappa w).
    const double u = rng.uniform();
    return 1.0 + std::log1p(-(1.0 - u) * -std::expm1(-2.0 * kappa)) / kappa;
  }
  // Wood (1994).
  const double qm1 = q - 1.0;
  const double b = qm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + qm1 * qm1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + qm1 * std::log1p(-x0 * x0);
  for (;;) {
    const double z = rng.beta(0.5 * qm1, 0.5 * qm1);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const bool ok = kappa * w + qm1 * std::log1p(-x0 * w) - c >= std::log(rng.uniform());
    monitor.record(ok);
    if (ok) return w;
  }
}

// Draw x on S^{q-1} with density proportional to exp(-x^T diag(a) x),
// a >= 0 with min(a) = 0, by rejection from an angular central Gaussian.
class BinghamCore {
 public:
  explicit BinghamCore(const Eigen::VectorXd& lambda) : q_(static_cast<int>(lambda.size())) {
    a_ = lambda.maxCoeff() - lambda.array();
    // b solves sum_j 1 / (b + 2 a_j) = 1 on [1, q].
    double lo = 1.0, hi = q_;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double s = (1.0 / (mid + 2.0 * a_.array())).sum();
      (s > 1.0 ? lo : hi) = mid;
    }
    b_ = 0.5 * (lo + hi);
    omega_ = 1.0 + 2.0 * a_.array() / b_;
    sd_ = omega_.array().rsqrt();
    log_bound_ = 0.5 * (q_ - b_) - 0.5 * q_ * std::log(q_ / b_);
  }

  Eigen::VectorXd draw(Rng& rng, AcceptanceMonitor& monitor) const {
    Eigen::VectorXd y(q_);
    for (;;) {
      for (int j = 0; j < q_; ++j) y[j] = sd_[j] * rng.normal();
      const double norm = y.norm();
      if (!(norm > 1e-300)) continue;
      y /= norm;
      const double x2a = (a_.array() * y.array().square()).sum();
      const double x2o = (omega_.array() * y.array().square()).sum();
      const bool ok =
          std::log(rng.uniform()) < -x2a + 0.5 * q_ * std::log(x2o) + log_bound_;
      monitor.record(ok);
      if (ok) return y;
    }
  }

 private:
  int q_;
  Eigen::VectorXd a_;
  Eigen::VectorXd omega_;
  Eigen::VectorXd sd_;
  double b_ = 1.0;
  double log_bound_ = 0.0;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

Rng::Rng(SeedSpec seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                    static_cast<std::uint32_t>(seed.master_seed >> 32),
                    static_cast<std::uint32_t>(seed.stream_id),
                    static_cast<std::uint32_t>(seed.stream_id >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw ValidationError("gamma shape must be positive");
  if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  // Marsaglia and Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double draw_vm(Rng& rng, double theta0, double kappa) {
  if (kappa <= 0.0) return wrap_angle(theta0 + kTwoPi * rng.uniform());
  // Best and Fisher (1979), with tau - sqrt(2 tau) rewritten to avoid
  // cancellation at small kappa.
  const double root = std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double tau = 1.0 + root;
  const double rho = 2.0 * kappa * tau / ((root + 1.0) * (tau + std::sqrt(2.0 * tau)));
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(kPi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double angle = std::acos(std::clamp(f, -1.0, 1.0));
      return wrap_angle(rng.uniform() > 0.5 ? theta0 + angle : theta0 - angle);
    }
  }
}

std::vector<double> sample_vm(double theta0, Concentration kappa, long n, SeedSpec seed) {
  check_count(n);
  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& t : out) t = draw_vm(rng, theta0, kappa);
  return out;
}

Eigen::MatrixXd sample_vmf(const UnitVector& mu0, Concentration kappa, long n, SeedSpec seed) {
  check_count(n);
  const int q = mu0.dim();
  Rng rng(seed);
  Eigen::MatrixXd Z(n, q);
  if (q == 2) {
    const double theta0 = std::atan2(mu0[1], mu0[0]);
    for (long h = 0; h < n; ++h) {
      const double t = draw_vm(rng, theta0, kappa);
      Z(h, 0) = std::cos(t);
      Z(h, 1) = std::sin(t);
    }
    return Z;
  }
  if (kappa.value() == 0.0) {
    for (long h = 0; h < n; ++h) Z.row(h) = uniform_direction(rng, q).transpose();
    return Z;
  }
  const Eigen::MatrixXd R = rotation_to_e1(mu0);  // R e_1 = mu0
  AcceptanceMonitor monitor("vmf");
  Eigen::VectorXd y(q);
  for (long h = 0; h < n; ++h) {
    const double w = std::clamp(draw_vmf_cosine(rng, q, kappa, monitor), -1.0, 1.0);
    y[0] = w;
    y.tail(q - 1) = std::sqrt((1.0 - w) * (1.0 + w)) * uniform_direction(rng, q - 1);
    const Eigen::VectorXd z = R * y;
    Z.row(h) = z.transpose() / z.norm();
  }
  return Z;
}

Eigen::MatrixXd sample_bingham(const BinghamParams& params, long n, SeedSpec seed) {
  params.validate();
  check_count(n);
  const int q = static_cast<int>(params.lambda.size());
  Rng rng(seed);
  const BinghamCore core(params.lambda);
  AcceptanceMonitor monitor("bingham");
  Eigen::MatrixXd Z(n, q);
  for (long h = 0; h < n; ++h) {
    const Eigen::VectorXd z = params.Gamma * core.draw(rng, monitor);
    Z.row(h) = z.transpose() / z.norm();
  }
  return Z;
}

Eigen::MatrixXd sample_kent(const KentParams& params, long n, SeedSpec seed) {
  params.validate();
  check_count(n);
  Rng rng(seed);
  // kappa y1 = kappa - (kappa/2)(1 - y1)^2 - (kappa/2)(y2^2 + y3^2), so the
  // Kent density is a Bingham density with exponent
  // (kappa/2) y1^2 + beta (y2^2 - y3^2) times exp(-(kappa/2)(1 - y1)^2) <= 1.
  const Eigen::Vector3d lambda(0.5 * params.kappa, params.beta, -params.beta);
  const BinghamCore core(lambda);
  AcceptanceMonitor envelope("kent envelope");
  AcceptanceMonitor monitor("kent");
  Eigen::MatrixXd Z(n, 3);
  for (long h = 0; h < n; ++h) {
    for (;;) {
      const Eigen::VectorXd y = core.draw(rng, envelope);
      const double gap = 1.0 - y[0];
      const bool ok = std::log(rng.uniform()) < -0.5 * params.kappa * gap * gap;
      monitor.record(ok);
      if (ok) {
        const Eigen::Vector3d z = params.Gamma * y;
        Z.row(h) = z.transpose() / z.norm();
        break;
      }
    }
  }
  return Z;
}

Eigen::MatrixXd sample_sine(const SineModelParams& params, long n, SeedSpec seed,
                            GibbsOptions options) {
  params.validate();
  check_count(n);
  if (options.burnin < 0 || options.thin < 1)
    throw ValidationError("Gibbs options need burnin >= 0 and thin >= 1");
  const int k = params.k();
  Rng rng(seed);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sin_phi = Eigen::VectorXd::Zero(k);

  auto sweep = [&] {
    for (int r = 0; r < k; ++r) {
      double b = 0.0;
      for (int s = 0; s < k; ++s)
        if (s != r) b += params.Lambda(r, s) * sin_phi[s];
      // kappa_r cos phi + b sin phi = hypot(kappa_r, b) cos(phi - atan2(b, kappa_r)).
      phi[r] = draw_vm(rng, std::atan2(b, params.kappa[r]), std::hypot(params.kappa[r], b));
      sin_phi[r] = std::sin(phi[r]);
    }
  };

  for (long it = 0; it < options.burnin; ++it) sweep();
  Eigen::MatrixXd Theta(n, k);
  for (long h = 0; h < n; ++h) {
    for (long t = 0; t < options.thin; ++t) sweep();
    for (int r = 0; r < k; ++r) Theta(h, r) = wrap_angle(phi[r] + params.theta0[r]);
  }
  return Theta;
}

}  // namespace dirsme
