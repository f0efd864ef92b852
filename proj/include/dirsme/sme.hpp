#pragma once

// Score matching estimation for canonical exponential families
// f(x) ∝ exp{pi^T t(x)} on the sphere or the torus.
//
// Minimizing the Hyvarinen divergence reduces to the quadratic
// (1/2) pi^T W pi - pi^T d with
//   w_{ab} = E <t_a, t_b>(x),   d_a = -E Delta_M t_a(x),
// so the estimator is pi_hat = W_n^{-1} d_n with sample averages in place
// of expectations.

#include <string>

#include <Eigen/Core>

namespace dirsme {

enum class Geometry { Sphere, Torus };

// Sufficient statistics of a canonical exponential family together with
// their first derivatives and Laplace-Beltrami images.
//
// On the sphere a point is a unit vector z in R^q and gradients() returns
// the Euclidean gradients u_l (one row per statistic, q columns). On the
// torus a point is a vector of k angles and gradients() returns partial
// derivatives with respect to those angles; the flat metric makes the
// inner product a plain dot product.
class StatSpec {
 public:
  virtual ~StatSpec() = default;

  virtual Geometry geometry() const = 0;
  // q for the sphere, k for the torus.
  virtual int dim() const = 0;
  // Number of statistics m.
  virtual int size() const = 0;

  virtual Eigen::VectorXd values(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd gradients(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd laplacians(const Eigen::VectorXd& x) const = 0;

  virtual std::string label(int l) const = 0;
};

// Empirical score matching moments.
struct MomentPair {
  Eigen::MatrixXd W;
  Eigen::VectorXd d;
  long n = 0;
};

struct NaturalParams {
  Eigen::VectorXd pi;
};

// W_n and d_n as 1/n sample averages over the rows of samples. On the
// sphere w = (1/n) sum {u_a^T u_b - v_a v_b} with v = z^T u.
MomentPair accumulate(const Eigen::MatrixXd& samples, const StatSpec& spec);

// Adds one observation's contribution (unnormalized) to W and d.
void accumulate_point(const Eigen::VectorXd& x, const StatSpec& spec, Eigen::MatrixXd& W,
                      Eigen::VectorXd& d);

// Smallest eigenvalue of W.
double check_pd(const MomentPair& mp);

// 1e-10 * trace(W) / m.
double pd_threshold(const MomentPair& mp);

// Condition number of W (ratio of extreme eigenvalues); +inf when singular.
double condition_number(const MomentPair& mp);

// pi_hat = W^{-1} d by Cholesky factorization. Throws SingularW when the
// smallest eigenvalue of W does not exceed pd_threshold.
NaturalParams solve(const MomentPair& mp);

// (1/2) pi^T W pi - pi^T d.
double objective(const NaturalParams& params, const MomentPair& mp);

}  // namespace dirsme
