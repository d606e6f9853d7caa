#pragma once

#include <Eigen/Dense>

#include "dgmv/errors.hpp"

namespace dgmv {

/// The factor model: n risk factors whose change over the horizon dt is
/// ΔS ~ N(0, sigma·dt). The drift is carried but pinned to zero; the moment
/// formulas downstream assume it.
struct FactorModel {
  Eigen::MatrixXd sigma;   ///< per-unit-time covariance, n×n SPD
  double dt = 1.0;         ///< horizon, units of time
  Eigen::VectorXd levels;  ///< current factor values S
  Eigen::VectorXd drift;   ///< must be zero; empty means zero

  // set by validate_factor_model
  Eigen::MatrixXd chol;  ///< lower L with L·Lᵀ = sigma
  bool validated = false;

  Eigen::Index n() const { return sigma.rows(); }

  /// Covariance of ΔS over the horizon: sigma·dt.
  Eigen::MatrixXd sigma_eff() const { return sigma * dt; }

  /// Lower-triangular factor of sigma_eff, reusing the cached Cholesky.
  Eigen::MatrixXd chol_eff() const { return chol * std::sqrt(dt); }
};

FactorModel make_factor_model(Eigen::MatrixXd sigma, double dt,
                              Eigen::VectorXd levels = Eigen::VectorXd());

/// Checks symmetry (1e-12 relative), positive definiteness (Cholesky), and
/// dimensions; caches the Cholesky factor for the reduction step. Symmetrizes
/// sub-tolerance asymmetry; anything larger is a data error, not repaired.
FactorModel validate_factor_model(FactorModel model);

/// Portfolio weights w = x / V(S,t).
Eigen::VectorXd weights_from_shares(const Eigen::VectorXd& positions, double book_value);

}  // namespace dgmv
