#pragma once

// Sufficient statistics for the directional models.
//
// Every sphere statistic used here is a spherical harmonic of degree 1 or
// 2, so its Laplace-Beltrami image is -lambda_k t with lambda_1 = q - 1 and
// lambda_2 = 2q.

#include <vector>

#include "dirsme/sme.hpp"

namespace dirsme {

// One statistic on S_{q-1}; indices are 0-based coordinates.
struct SphereTerm {
  enum class Kind {
    Linear,    // z_i
    QuadDiff,  // z_i^2 - z_j^2
    Cross,     // 2 z_i z_j
  };
  Kind kind;
  int i = 0;
  int j = 0;

  static SphereTerm linear(int i) { return {Kind::Linear, i, i}; }
  static SphereTerm quad_diff(int i, int j) { return {Kind::QuadDiff, i, j}; }
  static SphereTerm cross(int i, int j) { return {Kind::Cross, i, j}; }
};

class SphereStatSpec final : public StatSpec {
 public:
  SphereStatSpec(int q, std::vector<SphereTerm> terms);

  Geometry geometry() const override { return Geometry::Sphere; }
  int dim() const override { return q_; }
  int size() const override { return static_cast<int>(terms_.size()); }

  Eigen::VectorXd values(const Eigen::VectorXd& z) const override;
  // Rows are the Euclidean gradients u_l.
  Eigen::MatrixXd gradients(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd laplacians(const Eigen::VectorXd& z) const override;
  std::string label(int l) const override;

  // v_l = z^T u_l.
  Eigen::VectorXd radial_components(const Eigen::VectorXd& z) const;
  // Degree of the harmonic t_l (1 or 2).
  int degree(int l) const;
  const std::vector<SphereTerm>& terms() const { return terms_; }

 private:
  int q_;
  std::vector<SphereTerm> terms_;
};

// Full Fisher-Bingham: z_j (j = 1..q), z_j^2 - z_q^2 (j = 1..q-1),
// 2 z_i z_j (i < j, row-major). m = q + (q - 1) + q(q - 1)/2.
SphereStatSpec fb_statspec(int q);

// Full von Mises-Fisher: t = z. On the circle t = (cos theta, sin theta).
SphereStatSpec vmf_full_statspec(int q);

// Reduced von Mises-Fisher after standardization: t = z_1.
SphereStatSpec vmf_reduced_statspec(int q);

// Reduced Bingham: z_j^2 - z_q^2, j = 1..q-1.
SphereStatSpec bingham_reduced_statspec(int q);

// Reduced Kent on S_2: (z_1, z_2^2 - z_3^2).
SphereStatSpec kent_reduced_statspec();

// Reduced multivariate von Mises sine model on the torus (S_1)^k:
// cos phi_r (r = 1..k), then sin phi_r sin phi_s (r < s, row-major).
class SineStatSpec final : public StatSpec {
 public:
  explicit SineStatSpec(int k);

  Geometry geometry() const override { return Geometry::Torus; }
  int dim() const override { return k_; }
  int size() const override { return k_ + k_ * (k_ - 1) / 2; }

  Eigen::VectorXd values(const Eigen::VectorXd& phi) const override;
  Eigen::MatrixXd gradients(const Eigen::VectorXd& phi) const override;
  Eigen::VectorXd laplacians(const Eigen::VectorXd& phi) const override;
  std::string label(int l) const override;

  // Position of lambda^{(rs)} (r < s) in the parameter vector.
  int pair_index(int r, int s) const;

 private:
  int k_;
};

}  // namespace dirsme
