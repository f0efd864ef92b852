#include "dirsme/statspecs.hpp"

#include <cmath>
#include <string>

#include "dirsme/errors.hpp"

namespace dirsme {

SphereStatSpec::SphereStatSpec(int q, std::vector<SphereTerm> terms)
    : q_(q), terms_(std::move(terms)) {
  if (q < 2) throw ValidationError("sphere statistics need q >= 2");
  if (terms_.empty()) throw ValidationError("need at least one statistic");
  for (const auto& t : terms_) {
    if (t.i < 0 || t.i >= q || t.j < 0 || t.j >= q)
      throw ValidationError("statistic index out of range");
    if (t.kind != SphereTerm::Kind::Linear && t.i == t.j)
      throw ValidationError("quadratic statistic needs two distinct coordinates");
  }
}

Eigen::VectorXd SphereStatSpec::values(const Eigen::VectorXd& z) const {
  Eigen::VectorXd t(size());
  for (int l = 0; l < size(); ++l) {
    const auto& term = terms_[l];
    switch (term.kind) {
      case SphereTerm::Kind::Linear: t[l] = z[term.i]; break;
      case SphereTerm::Kind::QuadDiff: t[l] = z[term.i] * z[term.i] - z[term.j] * z[term.j]; break;
      case SphereTerm::Kind::Cross: t[l] = 2.0 * z[term.i] * z[term.j]; break;
    }
  }
  return t;
}

Eigen::MatrixXd SphereStatSpec::gradients(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(size(), q_);
  for (int l = 0; l < size(); ++l) {
    const auto& term = terms_[l];
    switch (term.kind) {
      case SphereTerm::Kind::Linear:
        u(l, term.i) = 1.0;
        break;
      case SphereTerm::Kind::QuadDiff:
        u(l, term.i) = 2.0 * z[term.i];
        u(l, term.j) = -2.0 * z[term.j];
        break;
      case SphereTerm::Kind::Cross:
        u(l, term.i) = 2.0 * z[term.j];
        u(l, term.j) = 2.0 * z[term.i];
        break;
    }
  }
  return u;
}

Eigen::VectorXd SphereStatSpec::laplacians(const Eigen::VectorXd& z) const {
  Eigen::VectorXd t = values(z);
  const double lambda1 = q_ - 1.0;
  const double lambda2 = 2.0 * q_;
  for (int l = 0; l < size(); ++l) t[l] *= -(degree(l) == 1 ? lambda1 : lambda2);
  return t;
}

Eigen::VectorXd SphereStatSpec::radial_components(const Eigen::VectorXd& z) const {
  return gradients(z) * z;
}

int SphereStatSpec::degree(int l) const {
  return terms_.at(l).kind == SphereTerm::Kind::Linear ? 1 : 2;
}

std::string SphereStatSpec::label(int l) const {
  const auto& term = terms_.at(l);
  const std::string zi = "z" + std::to_string(term.i + 1);
  const std::string zj = "z" + std::to_string(term.j + 1);
  switch (term.kind) {
    case SphereTerm::Kind::Linear: return zi;
    case SphereTerm::Kind::QuadDiff: return zi + "^2-" + zj + "^2";
    case SphereTerm::Kind::Cross: return "2*" + zi + "*" + zj;
  }
  return {};
}

SphereStatSpec fb_statspec(int q) {
  std::vector<SphereTerm> terms;
  for (int j = 0; j < q; ++j) terms.push_back(SphereTerm::linear(j));
  for (int j = 0; j + 1 < q; ++j) terms.push_back(SphereTerm::quad_diff(j, q - 1));
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) terms.push_back(SphereTerm::cross(i, j));
  return SphereStatSpec(q, std::move(terms));
}

SphereStatSpec vmf_full_statspec(int q) {
  std::vector<SphereTerm> terms;
  for (int j = 0; j < q; ++j) terms.push_back(SphereTerm::linear(j));
  return SphereStatSpec(q, std::move(terms));
}

SphereStatSpec vmf_reduced_statspec(int q) {
  return SphereStatSpec(q, {SphereTerm::linear(0)});
}

SphereStatSpec bingham_reduced_statspec(int q) {
  std::vector<SphereTerm> terms;
  for (int j = 0; j + 1 < q; ++j) terms.push_back(SphereTerm::quad_diff(j, q - 1));
  return SphereStatSpec(q, std::move(terms));
}

SphereStatSpec kent_reduced_statspec() {
  return SphereStatSpec(3, {SphereTerm::linear(0), SphereTerm::quad_diff(1, 2)});
}

SineStatSpec::SineStatSpec(int k) : k_(k) {
  if (k < 1) throw ValidationError("torus dimension must be >= 1");
}

int SineStatSpec::pair_index(int r, int s) const {
  if (!(0 <= r && r < s && s < k_)) throw ValidationError("need 0 <= r < s < k");
  // Row-major position of (r, s) among the upper-triangle pairs.
  return k_ + r * (2 * k_ - r - 1) / 2 + (s - r - 1);
}

Eigen::VectorXd SineStatSpec::values(const Eigen::VectorXd& phi) const {
  Eigen::VectorXd t(size());
  int l = 0;
  for (int r = 0; r < k_; ++r) t[l++] = std::cos(phi[r]);
  for (int r = 0; r < k_; ++r)
    for (int s = r + 1; s < k_; ++s) t[l++] = std::sin(phi[r]) * std::sin(phi[s]);
  return t;
}

Eigen::MatrixXd SineStatSpec::gradients(const Eigen::VectorXd& phi) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size(), k_);
  int l = 0;
  for (int r = 0; r < k_; ++r) g(l++, r) = -std::sin(phi[r]);
  for (int r = 0; r < k_; ++r) {
    for (int s = r + 1; s < k_; ++s) {
      g(l, r) = std::cos(phi[r]) * std::sin(phi[s]);
      g(l, s) = std::sin(phi[r]) * std::cos(phi[s]);
      ++l;
    }
  }
  return g;
}

Eigen::VectorXd SineStatSpec::laplacians(const Eigen::VectorXd& phi) const {
  // cos phi_r has eigenvalue -1, sin phi_r sin phi_s has eigenvalue -2.
  Eigen::VectorXd t = values(phi);
  t.head(k_) *= -1.0;
  t.tail(size() - k_) *= -2.0;
  return t;
}

std::string SineStatSpec::label(int l) const {
  if (l < k_) return "cos(phi" + std::to_string(l + 1) + ")";
  for (int r = 0; r < k_; ++r)
    for (int s = r + 1; s < k_; ++s)
      if (pair_index(r, s) == l)
        return "sin(phi" + std::to_string(r + 1) + ")*sin(phi" + std::to_string(s + 1) + ")";
  throw ValidationError("statistic index out of range");
}

}  // namespace dirsme
