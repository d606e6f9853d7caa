#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "dgmv/instruments.hpp"

namespace dgmv {

/// Portfolio-level sensitivities: a = theta·dt, delta = Σ x_k δ^k,
/// gamma = Σ x_k Γ^k.
struct AggregateGreeks {
  double a = 0.0;
  Eigen::VectorXd delta;
  Eigen::MatrixXd gamma;
};

AggregateGreeks aggregate(std::span<const GreekBundle> bundles, const Eigen::VectorXd& positions,
                          double dt);

/// The diagonalized P&L form. With Z ~ N(0, I_n) the approximated portfolio
/// change is  Y = a + bᵀZ + ZᵀΛZ,  where C·Cᵀ = sigma·dt, b = Cᵀδ, and
/// Λ = diag(lambda) = ½CᵀΓC. C = C̃·U combines the Cholesky factor C̃ with
/// the orthogonal U that diagonalizes ½C̃ᵀΓC̃.
struct QuadraticReduction {
  double a = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd c_matrix;
  Eigen::MatrixXd u_matrix;

  Eigen::Index n() const { return b.size(); }
};

QuadraticReduction reduce(double a, const Eigen::VectorXd& delta, const Eigen::MatrixXd& gamma,
                          const FactorModel& model);

/// The two quadratic pieces of Var(δV) = ½xᵀ(Σ̂+Q)x:
///   sigma_hat = 2 Mᵀ Σ_eff M with M_{ik} = δ^k_i,
///   q(i,j) = tr(Γ^i Σ_eff Γ^j Σ_eff).
struct VarianceParts {
  Eigen::MatrixXd sigma_hat;
  Eigen::MatrixXd q;

  Eigen::MatrixXd h() const { return sigma_hat + q; }
};

VarianceParts variance_parts(std::span<const GreekBundle> bundles, const FactorModel& model);

/// Data of the two portfolio programs:
///   P5: min ½xᵀHx  s.t.  a + xᵀ(p + theta_dt) = target, valuesᵀx = 1
///   P6: min ½xᵀHx  s.t.  valuesᵀx = 1
/// The deterministic P&L term is linear in the positions, theta_dt_k = θ_k·dt;
/// it enters the mean constraint only, never H. `a` is an extra constant
/// offset for hand-built problems and is zero when assembled from a book.
struct MVProblem {
  Eigen::MatrixXd h;           ///< Σ̂ + Q, symmetric positive definite
  Eigen::VectorXd p;           ///< p_k = ½ tr(Γ^k Σ_eff)
  Eigen::VectorXd theta_dt;    ///< θ_k·dt; empty means zero
  double a = 0.0;
  Eigen::VectorXd values;      ///< V_k(S,t)
  std::optional<double> target;
  Eigen::MatrixXd sigma_hat;   ///< kept with its factor 2
  Eigen::MatrixXd q_matrix;

  Eigen::Index size() const { return h.rows(); }

  /// Coefficient row of the mean constraint: E[δV] = a + xᵀ·mean_row().
  Eigen::VectorXd mean_row() const {
    return theta_dt.size() == 0 ? p : Eigen::VectorXd(p + theta_dt);
  }
};

/// Assembles H, p, theta_dt and the value vector from per-instrument greeks.
/// H must come out positive definite; redundant instruments make it singular
/// and are reported with a near-null direction.
MVProblem assemble_problem(std::span<const GreekBundle> bundles, const FactorModel& model,
                           std::optional<double> target = std::nullopt);

}  // namespace dgmv
