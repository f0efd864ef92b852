#include "dirsme/manifold.hpp"

#include <cmath>
#include <string>

#include "dirsme/errors.hpp"

namespace dirsme {

double wrap_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw ValidationError("unit vector needs q >= 2 coordinates");
  const double norm = coords_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ValidationError("cannot normalize a zero or non-finite vector");
  coords_ /= norm;
}

UnitVector UnitVector::axis(int q, int j) {
  if (j < 0 || j >= q) throw ValidationError("axis index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
  e[j] = 1.0;
  return UnitVector(std::move(e));
}

Eigen::Vector3d to_euclidean(const PolarPoint& x) {
  const double s = std::sin(x.theta);
  return {std::cos(x.theta), s * std::cos(x.phi), s * std::sin(x.phi)};
}

PolarPoint to_polar(const Eigen::Vector3d& z) {
  const double rho = std::hypot(z[1], z[2]);
  return {std::atan2(rho, z[0]), wrap_angle(std::atan2(z[2], z[1]))};
}

double sphere_eigenvalue(int k, int q) {
  if (k < 0) throw ValidationError("harmonic degree must be >= 0");
  if (q < 2) throw ValidationError("ambient dimension must be >= 2");
  return static_cast<double>(k) * static_cast<double>(k + q - 2);
}

namespace {

void require_same_dim(const UnitVector& z, const Eigen::VectorXd& g) {
  if (g.size() != z.dim())
    throw ValidationError("dimension mismatch: point has " + std::to_string(z.dim()) +
                          " coordinates, vector has " + std::to_string(g.size()));
}

void require_away_from_pole(const PolarPoint& at, double h) {
  if (at.theta < 10.0 * h || at.theta > std::numbers::pi - 10.0 * h)
    throw ValidationError("finite differences refused: point within 10h of a pole");
}

}  // namespace

Eigen::VectorXd project_tangent(const UnitVector& z, const Eigen::VectorXd& g) {
  require_same_dim(z, g);
  const Eigen::VectorXd& c = z.coords();
  return g - c * c.dot(g);
}

double gradient_inner_product(const UnitVector& z, const Eigen::VectorXd& g1,
                              const Eigen::VectorXd& g2) {
  require_same_dim(z, g1);
  require_same_dim(z, g2);
  const Eigen::VectorXd& c = z.coords();
  return g1.dot(g2) - c.dot(g1) * c.dot(g2);
}

double polar_inner_product(double theta, const Eigen::Vector2d& grad_u,
                           const Eigen::Vector2d& grad_v) {
  const double s = std::sin(theta);
  return grad_u[0] * grad_v[0] + grad_u[1] * grad_v[1] / (s * s);
}

Eigen::Vector2d polar_gradient(const SphereField& u, const PolarPoint& at, double h) {
  require_away_from_pole(at, h);
  const double dt = (u({at.theta + h, at.phi}) - u({at.theta - h, at.phi})) / (2.0 * h);
  const double dp = (u({at.theta, at.phi + h}) - u({at.theta, at.phi - h})) / (2.0 * h);
  return {dt, dp};
}

double laplace_beltrami_s2(const SphereField& u, const PolarPoint& at, double h) {
  require_away_from_pole(at, h);
  const double t = at.theta;
  const double p = at.phi;
  const double u0 = u(at);
  const double tp = u({t + h, p});
  const double tm = u({t - h, p});
  const double pp = u({t, p + h});
  const double pm = u({t, p - h});
  const double s = std::sin(t);
  const double u_tt = (tp - 2.0 * u0 + tm) / (h * h);
  const double u_t = (tp - tm) / (2.0 * h);
  const double u_pp = (pp - 2.0 * u0 + pm) / (h * h);
  return u_tt + std::cos(t) / s * u_t + u_pp / (s * s);
}

double laplace_beltrami_embedded(const EmbeddedField& f, const UnitVector& z, double h) {
  const auto extended = [&f](const Eigen::VectorXd& x) {
    return f(x / x.norm());
  };
  const Eigen::VectorXd& c = z.coords();
  const double f0 = extended(c);
  double lap = 0.0;
  Eigen::VectorXd x = c;
  for (int i = 0; i < c.size(); ++i) {
    x[i] = c[i] + h;
    const double fp = extended(x);
    x[i] = c[i] - h;
    const double fm = extended(x);
    x[i] = c[i];
    lap += (fp - 2.0 * f0 + fm) / (h * h);
  }
  return lap;
}

QuadratureGrid::QuadratureGrid(int resolution) : resolution_(resolution) {
  if (resolution < 1) throw ValidationError("quadrature resolution must be >= 1");
  const int n_theta = resolution;
  const int n_phi = 2 * resolution;
  const double dphi = kTwoPi / n_phi;
  const double pi = std::numbers::pi;

  std::vector<double> theta(n_theta);
  std::vector<double> w_theta(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    theta[i] = (i + 0.5) * pi / n_theta;
    // Fejer's first rule for int_{-1}^{1} g(x) dx on x = cos(theta_i).
    double sum = 0.0;
    for (int j = 1; j <= n_theta / 2; ++j)
      sum += std::cos(2.0 * j * theta[i]) / (4.0 * j * j - 1.0);
    w_theta[i] = 2.0 / n_theta * (1.0 - 2.0 * sum);
  }

  nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j)
      nodes_.push_back({{theta[i], (j + 0.5) * dphi}, w_theta[i] * dphi});
}

double QuadratureGrid::total_weight() const {
  double s = 0.0;
  for (const auto& node : nodes_) s += node.weight;
  return s;
}

double QuadratureGrid::integrate(const SphereField& f) const {
  double s = 0.0;
  for (const auto& node : nodes_) s += node.weight * f(node.point);
  return s;
}

double stokes_residual(const SphereField& u, const SphereField& v, const QuadratureGrid& grid,
                       double h) {
  double total = 0.0;
  for (const auto& node : grid.nodes()) {
    const PolarPoint& x = node.point;
    const double ip = polar_inner_product(x.theta, polar_gradient(u, x, h), polar_gradient(v, x, h));
    total += node.weight * (ip + laplace_beltrami_s2(u, x, h) * v(x));
  }
  return std::abs(total);
}

}  // namespace dirsme
