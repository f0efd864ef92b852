#pragma once

// Geometry of the sphere S_p embedded in R^q (q = p + 1) and of the torus.
//
// Points on the sphere are carried in embedded Euclidean coordinates z.
// S_2 additionally has polar coordinates (theta = colatitude, phi =
// longitude) with z = (cos theta, sin theta cos phi, sin theta sin phi).
// The finite-difference operators and the quadrature grid here exist to
// check closed-form derivative information numerically.

#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace dirsme {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Default central-difference step.
inline constexpr double kFiniteDifferenceStep = 1e-4;

// Wraps an angle into [0, 2*pi).
double wrap_angle(double angle);

class UnitVector {
 public:
  // Normalizes coords; throws ValidationError when q < 2 or the norm is
  // zero or non-finite.
  explicit UnitVector(Eigen::VectorXd coords);

  static UnitVector axis(int q, int j);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

 private:
  Eigen::VectorXd coords_;
};

struct PolarPoint {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
};

Eigen::Vector3d to_euclidean(const PolarPoint& x);
PolarPoint to_polar(const Eigen::Vector3d& z);

// lambda_k = k(k + q - 2): spherical harmonics of degree k on S_{q-1} have
// Laplace-Beltrami eigenvalue -lambda_k.
double sphere_eigenvalue(int k, int q);

// (I - z z^T) g.
Eigen::VectorXd project_tangent(const UnitVector& z, const Eigen::VectorXd& g);

// Gradient inner product <u, v> from Euclidean gradients: g1^T P g2.
double gradient_inner_product(const UnitVector& z, const Eigen::VectorXd& g1,
                              const Eigen::VectorXd& g2);

// Gradient inner product on S_2 in polar coordinates, (grad u)^T G^{-1} (grad v)
// with G = diag(1, sin^2 theta). Gradients are (d/dtheta, d/dphi).
double polar_inner_product(double theta, const Eigen::Vector2d& grad_u,
                           const Eigen::Vector2d& grad_v);

using SphereField = std::function<double(const PolarPoint&)>;
using EmbeddedField = std::function<double(const Eigen::VectorXd&)>;

// Central-difference (d/dtheta, d/dphi). Refuses points within 10h of a pole.
Eigen::Vector2d polar_gradient(const SphereField& u, const PolarPoint& at,
                               double h = kFiniteDifferenceStep);

// Second-order central differences of
//   u_tt + cot(theta) u_t + u_pp / sin^2(theta).
// Throws ValidationError within 10h of a pole.
double laplace_beltrami_s2(const SphereField& u, const PolarPoint& at,
                           double h = kFiniteDifferenceStep);

// Laplace-Beltrami on S_{q-1} for any q: the Euclidean Laplacian of the
// degree-0 homogeneous extension f(x / |x|), evaluated at z.
double laplace_beltrami_embedded(const EmbeddedField& f, const UnitVector& z,
                                 double h = kFiniteDifferenceStep);

struct QuadratureNode {
  PolarPoint point;
  double weight = 0.0;
};

// Product rule on S_2 for mu(dx) = sin(theta) dtheta dphi.
//
// theta: R cell midpoints (i + 1/2) pi / R with Fejer first-rule weights, so
// the poles are never evaluated and the sin(theta) factor is integrated
// exactly. phi: 2R equally spaced midpoints.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(int resolution);

  int resolution() const { return resolution_; }
  const std::vector<QuadratureNode>& nodes() const { return nodes_; }
  double total_weight() const;

  double integrate(const SphereField& f) const;

 private:
  int resolution_;
  std::vector<QuadratureNode> nodes_;
};

// |int <u, v> dmu + int (Delta u) v dmu|, which vanishes on a compact
// manifold. Derivatives are taken by finite differences with step h.
double stokes_residual(const SphereField& u, const SphereField& v, const QuadratureGrid& grid,
                       double h = kFiniteDifferenceStep);

}  // namespace dirsme
