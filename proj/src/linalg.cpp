#include "dgmv/linalg.hpp"

#include <cmath>

namespace dgmv {

std::optional<Eigen::MatrixXd> lower_cholesky(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) return std::nullopt;
  const double scale = a.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > rel_tol * scale)) return std::nullopt;
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace dgmv
