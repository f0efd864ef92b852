#pragma once

// Small helpers shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace testing_support {

// Uniform points on S_{q-1}, independent of the library's samplers.
inline Eigen::MatrixXd random_sphere(int n, int q, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd Z(n, q);
  for (int h = 0; h < n; ++h) {
    Eigen::VectorXd x(q);
    for (int j = 0; j < q; ++j) x[j] = normal(gen);
    Z.row(h) = x.transpose() / x.norm();
  }
  return Z;
}

// Points biased towards +e_1 so that mean directions are well defined.
inline Eigen::MatrixXd random_cap(int n, int q, std::uint64_t seed, double shift = 1.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd Z(n, q);
  for (int h = 0; h < n; ++h) {
    Eigen::VectorXd x(q);
    for (int j = 0; j < q; ++j) x[j] = normal(gen);
    x[0] += shift;
    Z.row(h) = x.transpose() / x.norm();
  }
  return Z;
}

inline Eigen::MatrixXd random_angles(int n, int k, std::uint64_t seed, double spread = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd T(n, k);
  for (int h = 0; h < n; ++h)
    for (int r = 0; r < k; ++r) T(h, r) = 0.5 * r + spread * normal(gen);
  return T;
}

inline double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

struct MeanSe {
  double mean;
  double se;  // standard error of the mean
  double sd;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(xs.size())), std::sqrt(v)};
}

}  // namespace testing_support
