#include "dgmv/optimizer.hpp"

#include <cmath>
#include <string>

#include "dgmv/linalg.hpp"

namespace dgmv {

namespace {

constexpr double kFeasTol = 1e-10;      // absolute, on constraint residuals
constexpr double kRankRelTol = 1e-12;   // times ||A|| for rank decisions

struct KktSolve {
  Eigen::VectorXd x;
  Eigen::VectorXd nu;
  double residual = 0.0;
};

double kkt_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& nu) {
  const double stat = (h * x - a.transpose() * nu).cwiseAbs().maxCoeff();
  const double feas = a.rows() ? (a * x - c).cwiseAbs().maxCoeff() : 0.0;
  return std::max(stat, feas);
}

// min ½xᵀHx s.t. Ax = c, H PD, A full row rank. LDLT on the saddle system
// with one refinement pass; LU fallback if the factorization misbehaves.
KktSolve solve_kkt(const Eigen::MatrixXd& h, const Eigen::MatrixXd& a, const Eigen::VectorXd& c) {
  const Eigen::Index m = h.rows();
  const Eigen::Index r = a.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + r, m + r);
  kkt.topLeftCorner(m, m) = h;
  kkt.topRightCorner(m, r) = a.transpose();
  kkt.bottomLeftCorner(r, m) = a;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + r);
  rhs.tail(r) = c;

  const double scale = 1.0 + kkt.cwiseAbs().maxCoeff();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(kkt);
  Eigen::VectorXd sol;
  if (ldlt.info() == Eigen::Success) {
    sol = ldlt.solve(rhs);
    sol += ldlt.solve(rhs - kkt * sol);
  }
  if (ldlt.info() != Eigen::Success || !sol.allFinite() ||
      (kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible())
      throw SolverError(Errc::SingularKKT, "KKT matrix is numerically singular");
    sol = lu.solve(rhs);
    sol += lu.solve(rhs - kkt * sol);
  }

  KktSolve out;
  out.x = sol.head(m);
  out.nu = -sol.tail(r);  // Hx + Aᵀy = 0 with y = −ν
  out.residual = kkt_residual(h, a, c, out.x, out.nu);
  if (!out.x.allFinite() || out.residual > 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw SolverError(Errc::SingularKKT,
                      "KKT solve did not reach tolerance, residual " +
                          std::to_string(out.residual));
  return out;
}

Eigen::MatrixXd require_pd(const MVProblem& pb) {
  std::optional<Eigen::MatrixXd> l = lower_cholesky(pb.h);
  if (!l) throw SolverError(Errc::NotPD, "H is not positive definite");
  return std::move(*l);
}

MVSolution finish(const MVProblem& pb, Eigen::VectorXd x, Eigen::VectorXd nu, double residual,
                  bool min_norm, bool has_mean_constraint) {
  MVSolution s;
  s.positions = std::move(x);
  s.multipliers = std::move(nu);
  s.variance = 0.5 * s.positions.dot(pb.h * s.positions);
  s.mean = pb.a + s.positions.dot(pb.mean_row());
  s.kkt_residual = residual;
  s.budget_residual = std::abs(pb.values.dot(s.positions) - 1.0);
  s.mean_residual = has_mean_constraint && pb.target ? std::abs(s.mean - *pb.target) : 0.0;
  s.min_norm_multipliers = min_norm;
  return s;
}

}  // namespace

MVSolution solve_p5(const MVProblem& pb) {
  if (!pb.target) throw std::invalid_argument("solve_p5 requires a target mean");
  const Eigen::Index m = pb.size();
  if (pb.values.size() != m || pb.p.size() != m)
    throw ValidationError(Errc::DimensionMismatch, "problem vectors do not match H");
  require_pd(pb);

  Eigen::MatrixXd a(2, m);
  a.row(0) = pb.mean_row().transpose();
  a.row(1) = pb.values.transpose();
  Eigen::Vector2d c(*pb.target - pb.a, 1.0);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sv_max = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankRelTol * sv_max) ++rank;

  if (rank == 2) {
    KktSolve k = solve_kkt(pb.h, a, c);
    return finish(pb, std::move(k.x), std::move(k.nu), k.residual, false, true);
  }

  // Dependent (or vanishing) constraint rows: solvable only if c lies in
  // the range of A; then x* is still unique and we return the minimum-norm
  // multipliers.
  const Eigen::MatrixXd u_r = svd.matrixU().leftCols(rank);
  const Eigen::VectorXd c_perp = c - u_r * (u_r.transpose() * c);
  if (c_perp.cwiseAbs().maxCoeff() > kFeasTol * (1.0 + c.cwiseAbs().maxCoeff()))
    throw SolverError(Errc::Infeasible,
                      "mean and budget rows are linearly dependent with inconsistent "
                      "right-hand sides; target " +
                          std::to_string(*pb.target) + " is unreachable");

  if (rank == 0) {
    // both rows vanish; the unconstrained minimizer of a PD quadratic is 0
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(2);
    const double res = kkt_residual(pb.h, a, c, x, nu);
    return finish(pb, std::move(x), std::move(nu), res, true, true);
  }

  const Eigen::MatrixXd a_red = u_r.transpose() * a;
  const Eigen::VectorXd c_red = u_r.transpose() * c;
  KktSolve k = solve_kkt(pb.h, a_red, c_red);
  Eigen::VectorXd nu = u_r * k.nu;
  const double res = kkt_residual(pb.h, a, c, k.x, nu);
  return finish(pb, std::move(k.x), std::move(nu), res, true, true);
}

MVSolution solve_p6(const MVProblem& pb) {
  const Eigen::Index m = pb.size();
  if (pb.values.size() != m)
    throw ValidationError(Errc::DimensionMismatch, "problem vectors do not match H");
  if (m == 0 || pb.values.cwiseAbs().maxCoeff() == 0.0)
    throw SolverError(Errc::ZeroValues, "value vector is zero, budget constraint is vacuous");
  const Eigen::MatrixXd l = require_pd(pb);

  Eigen::VectorXd h_inv_v = l.triangularView<Eigen::Lower>().solve(pb.values);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(h_inv_v);
  const double denom = pb.values.dot(h_inv_v);
  Eigen::VectorXd x = h_inv_v / denom;
  Eigen::VectorXd nu(1);
  nu(0) = 1.0 / denom;

  Eigen::MatrixXd a(1, m);
  a.row(0) = pb.values.transpose();
  Eigen::VectorXd c(1);
  c(0) = 1.0;
  const double res = kkt_residual(pb.h, a, c, x, nu);
  return finish(pb, std::move(x), std::move(nu), res, false, false);
}

std::vector<FrontierPoint> frontier(const MVProblem& pb, std::span<const double> targets) {
  if (targets.empty()) throw std::invalid_argument("frontier needs at least one target");
  std::vector<FrontierPoint> points;
  points.reserve(targets.size());
  for (double target : targets) {
    FrontierPoint pt;
    pt.target = target;
    MVProblem local = pb;
    local.target = target;
    try {
      pt.solution = solve_p5(local);
      pt.ok = true;
      pt.status = "ok";
    } catch (const Error& e) {
      pt.ok = false;
      pt.status = e.what();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace dgmv
