#pragma once

#include <vector>

#include "dgmv/reduction.hpp"

namespace dgmv {

/// Static quadratic hedge: short one unit of `target`, choose positions in
/// `hedgers` to minimize the variance of the hedging error. Cash is
/// variance-free and absorbs the budget.
struct HedgeProblem {
  GreekBundle target;
  std::vector<GreekBundle> hedgers;
  FactorModel model;
};

struct HedgeSolution {
  Eigen::VectorXd hedge_positions;  ///< x_2..x_l
  double cash_position = 0.0;       ///< x_{l+1} = −Σ x_k V_k over the hedgers
  double residual_variance = 0.0;
  double financing = 0.0;           ///< x_{l+1} + V_target
  double unhedged_variance = 0.0;   ///< Var(δV_target), for comparison
  bool degenerate = false;          ///< redundant hedgers; minimum-norm positions
  double normal_residual = 0.0;     ///< max-norm residual of the normal equations
};

HedgeSolution solve_hedge(const HedgeProblem& hp);

}  // namespace dgmv
