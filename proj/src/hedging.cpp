#include "dgmv/hedging.hpp"

#include <algorithm>
#include <cmath>

namespace dgmv {

// The error book holds (+1 target, −x hedgers); its variance is
// ½ yᵀ(Σ̂+Q)y with y = (1, −x). Splitting H into blocks, minimizing over x
// gives the normal equations  H_hh x = h_t  with H_hh the hedger block and
// h_t the hedger-target column. Positive semidefiniteness of H guarantees
// consistency, so a singular block means redundant hedgers and any solution
// attains the same variance; we return the minimum-norm one.
HedgeSolution solve_hedge(const HedgeProblem& hp) {
  std::vector<GreekBundle> book;
  book.reserve(hp.hedgers.size() + 1);
  book.push_back(hp.target);
  book.insert(book.end(), hp.hedgers.begin(), hp.hedgers.end());

  const Eigen::MatrixXd h = variance_parts(book, hp.model).h();
  const Eigen::Index l = static_cast<Eigen::Index>(hp.hedgers.size());

  HedgeSolution sol;
  sol.unhedged_variance = 0.5 * h(0, 0);

  if (l == 0) {
    sol.hedge_positions = Eigen::VectorXd();
    sol.cash_position = 0.0;
    sol.residual_variance = sol.unhedged_variance;
    sol.financing = hp.target.value;
    return sol;
  }

  const Eigen::VectorXd h_t = h.block(1, 0, l, 1);
  const Eigen::MatrixXd h_hh = h.block(1, 1, l, l);

  // spectral solve: a rank-deficient hedger block means redundant hedgers,
  // and the pseudo-inverse picks the minimum-norm minimizer among the ties
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_hh);
  if (es.info() != Eigen::Success)
    throw SolverError(Errc::SingularNormalEquations,
                      "eigendecomposition of the hedger block failed");
  const Eigen::VectorXd& eig = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(eig.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    if (eig(i) > cutoff)
      inv(i) = 1.0 / eig(i);
    else
      sol.degenerate = true;
  }
  const Eigen::VectorXd x =
      es.eigenvectors() * inv.asDiagonal() * (es.eigenvectors().transpose() * h_t);
  sol.normal_residual = (h_hh * x - h_t).cwiseAbs().maxCoeff();

  sol.hedge_positions = x;
  sol.residual_variance =
      std::max(0.0, 0.5 * (h(0, 0) - 2.0 * x.dot(h_t) + x.dot(h_hh * x)));

  double hedger_value = 0.0;
  for (Eigen::Index k = 0; k < l; ++k) hedger_value += x(k) * hp.hedgers[k].value;
  sol.cash_position = -hedger_value;
  sol.financing = sol.cash_position + hp.target.value;
  return sol;
}

}  // namespace dgmv
