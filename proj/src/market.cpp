#include "dgmv/market.hpp"

#include <cmath>
#include <string>

#include "dgmv/linalg.hpp"

namespace dgmv {

FactorModel make_factor_model(Eigen::MatrixXd sigma, double dt, Eigen::VectorXd levels) {
  FactorModel model;
  model.sigma = std::move(sigma);
  model.dt = dt;
  model.levels = std::move(levels);
  return validate_factor_model(std::move(model));
}

FactorModel validate_factor_model(FactorModel model) {
  const Eigen::Index n = model.sigma.rows();
  if (n == 0 || model.sigma.cols() != n)
    throw ValidationError(Errc::BadDimension, "covariance must be square with n >= 1, got " +
                                                  std::to_string(n) + "x" +
                                                  std::to_string(model.sigma.cols()));
  if (!(model.dt > 0.0))
    throw ValidationError(Errc::BadDimension, "dt must be > 0, got " + std::to_string(model.dt));

  if (model.levels.size() == 0) model.levels = Eigen::VectorXd::Zero(n);
  if (model.levels.size() != n)
    throw ValidationError(Errc::BadDimension, "levels must have length n");

  if (model.drift.size() == 0) model.drift = Eigen::VectorXd::Zero(n);
  if (model.drift.size() != n)
    throw ValidationError(Errc::BadDimension, "drift must have length n");
  if (model.drift.cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError(Errc::NonzeroDrift,
                          "nonzero drift is not supported; the moment formulas assume zero drift");

  const double scale = model.sigma.cwiseAbs().maxCoeff();
  const double asym = (model.sigma - model.sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw ValidationError(Errc::NotSymmetric,
                          "covariance asymmetry " + std::to_string(asym) + " exceeds tolerance");
  model.sigma = 0.5 * (model.sigma + model.sigma.transpose()).eval();

  std::optional<Eigen::MatrixXd> chol = lower_cholesky(model.sigma);
  if (!chol)
    throw ValidationError(Errc::NotPositiveDefinite, "covariance is not positive definite");
  model.chol = std::move(*chol);
  model.validated = true;
  return model;
}

Eigen::VectorXd weights_from_shares(const Eigen::VectorXd& positions, double book_value) {
  if (book_value == 0.0)
    throw ValidationError(Errc::ZeroBookValue, "portfolio value is zero, weights undefined");
  return positions / book_value;
}

}  // namespace dgmv
