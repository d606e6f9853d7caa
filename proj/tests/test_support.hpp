#pragma once

#include <Eigen/Dense>
#include <random>

// shared generators for the property-style tests

namespace testsup {

inline Eigen::VectorXd random_vector(std::mt19937_64& gen, Eigen::Index n, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, Eigen::Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = dist(gen);
  return 0.5 * (a + a.transpose()).eval();
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, Eigen::Index n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = dist(gen);
  std::uniform_real_distribution<double> ridge(0.1, 1.0);
  return a * a.transpose() + ridge(gen) * Eigen::MatrixXd::Identity(n, n);
}

inline double rel_err(double got, double want) {
  const double denom = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / denom;
}

}  // namespace testsup
