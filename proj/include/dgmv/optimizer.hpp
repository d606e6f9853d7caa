#pragma once

#include <span>
#include <string>
#include <vector>

#include "dgmv/reduction.hpp"

namespace dgmv {

/// Solution of P5/P6 with its KKT diagnostics.
struct MVSolution {
  Eigen::VectorXd positions;     ///< x*
  double variance = 0.0;         ///< ½ x*ᵀHx* = Var(δV)
  double mean = 0.0;             ///< a + x*ᵀ(p + theta_dt) = E[δV]
  Eigen::VectorXd multipliers;   ///< one per constraint; [mean, budget] for P5
  double kkt_residual = 0.0;     ///< max-norm of stationarity + feasibility
  double budget_residual = 0.0;  ///< |valuesᵀx − 1|
  double mean_residual = 0.0;    ///< |mean constraint residual| (P5)
  bool min_norm_multipliers = false;  ///< rank-deficient constraints, consistent RHS
};

/// Target-mean minimum variance:
///   min ½xᵀHx  s.t.  a + xᵀ(p + theta_dt) = target,  valuesᵀx = 1.
/// Solved through the symmetric-indefinite KKT system.
MVSolution solve_p5(const MVProblem& problem);

/// Global minimum variance:  min ½xᵀHx  s.t.  valuesᵀx = 1.
MVSolution solve_p6(const MVProblem& problem);

struct FrontierPoint {
  double target = 0.0;
  bool ok = false;
  std::string status;  ///< error text when not ok
  MVSolution solution; ///< valid when ok
};

/// P5 swept over the given targets; failures are reported per entry.
std::vector<FrontierPoint> frontier(const MVProblem& problem, std::span<const double> targets);

}  // namespace dgmv
