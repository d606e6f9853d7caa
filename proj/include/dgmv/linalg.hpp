#pragma once

#include <Eigen/Dense>
#include <optional>

namespace dgmv {

/// Lower-triangular Cholesky with an explicit pivot test: fails (returns
/// nullopt) when any pivot drops to rel_tol times the largest diagonal or
/// below. Eigen's LLT happily factors exactly singular PSD matrices, which
/// is precisely the case redundancy detection has to catch.
std::optional<Eigen::MatrixXd> lower_cholesky(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

}  // namespace dgmv
