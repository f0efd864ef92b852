#pragma once

// Directional models and their hybrid score matching estimators.
//
// A hybrid fit estimates the orientation parameters by moments, rotates the
// data to a standardized form, and then applies score matching to the
// reduced exponential family of concentration parameters. Each reduced
// model has closed-form (W_n, d_n); these agree with the generic engine
// applied to the matching StatSpec.
//
// Sample matrices are n x q (unit-vector rows) on the sphere and n x k
// (angles in radians) on the torus.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "dirsme/manifold.hpp"
#include "dirsme/sme.hpp"
#include "dirsme/special.hpp"

namespace dirsme {

// f(z) ∝ exp{b^T z + z^T A z}, A symmetric with trace 0.
struct FisherBinghamParams {
  Eigen::VectorXd b;
  Eigen::MatrixXd A;

  void validate() const;
  // Natural parameters in fb_statspec order.
  Eigen::VectorXd natural() const;
  static FisherBinghamParams from_natural(int q, const Eigen::VectorXd& pi);
};

struct VmfParams {
  Concentration kappa;
  UnitVector mu0;
};

// A = Gamma diag(lambda) Gamma^T with sum(lambda) = 0.
struct BinghamParams {
  Eigen::MatrixXd Gamma;
  Eigen::VectorXd lambda;

  void validate() const;
};

// exp{kappa y_1 + beta (y_2^2 - y_3^2)} with y = Gamma^T z.
struct KentParams {
  Eigen::Matrix3d Gamma = Eigen::Matrix3d::Identity();
  double kappa = 0.0;
  double beta = 0.0;

  void validate() const;
};

// exp{sum_r kappa_r cos phi_r + sum_{r<s} lambda_rs sin phi_r sin phi_s},
// phi = theta - theta0.
struct SineModelParams {
  Eigen::VectorXd theta0;
  Eigen::VectorXd kappa;
  Eigen::MatrixXd Lambda;  // symmetric, zero diagonal

  int k() const { return static_cast<int>(kappa.size()); }
  void validate() const;
  // (kappa block, then lambda_rs for r < s row-major).
  Eigen::VectorXd natural() const;
};

// --- orientation -----------------------------------------------------------

// Orthogonal R with R^T mu = e_1, built from one Householder reflection.
// The reflection is chosen so that R = I when mu = e_1 and R varies smoothly
// near e_1.
Eigen::MatrixXd rotation_to_e1(const UnitVector& mu);

struct Standardized {
  Eigen::MatrixXd rotation;  // columns are the estimated axes
  Eigen::MatrixXd Y;         // Z * rotation
};

// Y = Z R with R^T (zbar / |zbar|) = e_1. Throws ZeroResultant.
Standardized vmf_orientation(const Eigen::MatrixXd& Z);

struct BinghamStandardized {
  Eigen::MatrixXd G;            // eigenvectors of T = Z^T Z / n, columns
  Eigen::MatrixXd Y;            // Z G
  Eigen::VectorXd eigenvalues;  // descending
};

// Eigenvalues are sorted in decreasing order; each eigenvector's
// largest-magnitude entry is made positive.
BinghamStandardized bingham_standardize(const Eigen::MatrixXd& Z);

// Moment estimate of the Kent axes: ybar = (Rbar, 0, 0), T^(Y)_23 = 0 and
// T^(Y)_22 >= T^(Y)_33. Throws ZeroResultant.
Standardized kent_orientation(const Eigen::MatrixXd& Z);

struct SineCentered {
  Eigen::VectorXd theta0;  // per-column mean directions in [0, 2 pi)
  Eigen::MatrixXd Phi;     // Theta - theta0, wrapped to [0, 2 pi)
};

// Throws ZeroResultant naming the first column with a vanishing resultant.
SineCentered sine_center(const Eigen::MatrixXd& Theta);

// --- closed-form reduced moments ---------------------------------------------

// W = 1 - mean(y_1^2), d = (q - 1) mean(y_1).
MomentPair vmf_reduced_moments(const Eigen::MatrixXd& Y);

// Full circle model, t = (cos theta, sin theta).
MomentPair circle_full_moments(std::span<const double> theta);

MomentPair bingham_reduced_moments(const Eigen::MatrixXd& Y);
MomentPair kent_reduced_moments(const Eigen::MatrixXd& Y);
MomentPair sine_reduced_moments(const Eigen::MatrixXd& Phi);

// --- fits -------------------------------------------------------------------

struct VmfFit {
  double kappa;
  UnitVector mu0;
  Eigen::MatrixXd rotation;
  MomentPair moments;
};

// kappa_hat = d_n / W_n on the standardized data, mu0_hat = zbar / |zbar|.
// Throws DegenerateConcentration when W_n < 1e-12.
VmfFit vmf_fit_hybrid(const Eigen::MatrixXd& Z);

// Full von Mises-Fisher fit (t = z) through the generic engine.
VmfFit vmf_fit_full(const Eigen::MatrixXd& Z);

struct CircleFit {
  double theta0;  // [0, 2 pi)
  double kappa;
};

// Hybrid circle estimator in polar form: theta0 = atan2(Sbar, Cbar),
// kappa = n Rbar / sum sin^2(theta_h - theta0).
CircleFit vm_fit_hybrid_circle(std::span<const double> theta);

// Closed-form full score matching estimator on the circle. Throws SingularW
// when Rbar_2 >= 1 - 1e-12.
CircleFit vm_fit_full_circle(std::span<const double> theta);

struct BinghamFit {
  Eigen::VectorXd lambda;  // length q, sums to 0, ordered like G's columns
  Eigen::MatrixXd G;
  MomentPair moments;
};

BinghamFit bingham_fit_hybrid(const Eigen::MatrixXd& Z);

struct KentFit {
  double kappa;
  double beta;
  Eigen::Matrix3d Gamma;
  MomentPair moments;
};

KentFit kent_fit_hybrid(const Eigen::MatrixXd& Z);

struct SineFit {
  SineModelParams params;
  MomentPair moments;
};

SineFit sine_fit_hybrid(const Eigen::MatrixXd& Theta);

struct FisherBinghamFit {
  FisherBinghamParams params;
  MomentPair moments;
};

// Full Fisher-Bingham score matching through fb_statspec.
FisherBinghamFit fb_fit_full(const Eigen::MatrixXd& Z);

// Angles to rows (cos theta, sin theta).
Eigen::MatrixXd circle_to_unit_vectors(std::span<const double> theta);

}  // namespace dirsme
