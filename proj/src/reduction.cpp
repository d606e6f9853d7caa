#include "dgmv/reduction.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "dgmv/linalg.hpp"

namespace dgmv {

namespace {

void require_validated(const FactorModel& model) {
  if (!model.validated) throw std::logic_error("FactorModel must pass validate_factor_model first");
}

void check_bundle_dims(std::span<const GreekBundle> bundles, Eigen::Index n) {
  for (const GreekBundle& g : bundles)
    if (g.delta.size() != n || g.gamma.rows() != n || g.gamma.cols() != n)
      throw ValidationError(Errc::DimensionMismatch, "greek bundle does not match n = " +
                                                         std::to_string(n) + " factors");
}

std::string format_direction(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

}  // namespace

AggregateGreeks aggregate(std::span<const GreekBundle> bundles, const Eigen::VectorXd& positions,
                          double dt) {
  if (bundles.empty())
    throw ValidationError(Errc::DimensionMismatch, "aggregate needs at least one bundle");
  if (positions.size() != static_cast<Eigen::Index>(bundles.size()))
    throw ValidationError(Errc::DimensionMismatch,
                          "positions length does not match bundle count");
  const Eigen::Index n = bundles.front().n();
  check_bundle_dims(bundles, n);

  AggregateGreeks agg;
  agg.delta = Eigen::VectorXd::Zero(n);
  agg.gamma = Eigen::MatrixXd::Zero(n, n);
  double theta = 0.0;
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    const double x = positions(static_cast<Eigen::Index>(k));
    theta += x * bundles[k].theta;
    agg.delta += x * bundles[k].delta;
    agg.gamma += x * bundles[k].gamma;
  }
  agg.a = theta * dt;
  return agg;
}

QuadraticReduction reduce(double a, const Eigen::VectorXd& delta, const Eigen::MatrixXd& gamma,
                          const FactorModel& model) {
  require_validated(model);
  const Eigen::Index n = model.n();
  if (delta.size() != n || gamma.rows() != n || gamma.cols() != n)
    throw ValidationError(Errc::DimensionMismatch, "delta/gamma do not match the model dimension");

  QuadraticReduction qr;
  qr.a = a;
  const Eigen::MatrixXd c_tilde = model.chol_eff();

  if (gamma.isZero(0.0)) {
    // zero quadratic term: skip the eigensolver, any orthogonal U works
    qr.u_matrix = Eigen::MatrixXd::Identity(n, n);
    qr.lambda = Eigen::VectorXd::Zero(n);
    qr.c_matrix = c_tilde;
    qr.b = c_tilde.transpose() * delta;
    return qr;
  }

  Eigen::MatrixXd half_form = 0.5 * c_tilde.transpose() * gamma * c_tilde;
  half_form = 0.5 * (half_form + half_form.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(half_form);
  if (es.info() != Eigen::Success)
    throw SolverError(Errc::EigenFailure, "eigendecomposition of the quadratic term failed");

  qr.lambda = es.eigenvalues();
  qr.u_matrix = es.eigenvectors();
  qr.c_matrix = c_tilde * qr.u_matrix;
  qr.b = qr.c_matrix.transpose() * delta;
  return qr;
}

VarianceParts variance_parts(std::span<const GreekBundle> bundles, const FactorModel& model) {
  require_validated(model);
  if (bundles.empty())
    throw ValidationError(Errc::DimensionMismatch, "need at least one bundle");
  const Eigen::Index n = model.n();
  const Eigen::Index m = static_cast<Eigen::Index>(bundles.size());
  check_bundle_dims(bundles, n);

  const Eigen::MatrixXd sigma_eff = model.sigma_eff();

  Eigen::MatrixXd delta_map(n, m);  // M_{ik} = δ^k_i
  for (Eigen::Index k = 0; k < m; ++k) delta_map.col(k) = bundles[k].delta;

  VarianceParts parts;
  parts.sigma_hat = 2.0 * delta_map.transpose() * sigma_eff * delta_map;
  parts.sigma_hat = 0.5 * (parts.sigma_hat + parts.sigma_hat.transpose()).eval();

  std::vector<Eigen::MatrixXd> gs(m);  // Γ^k Σ_eff
  for (Eigen::Index k = 0; k < m; ++k) gs[k] = bundles[k].gamma * sigma_eff;

  parts.q.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) {
      const double tr = gs[i].cwiseProduct(gs[j].transpose()).sum();
      parts.q(i, j) = tr;
      parts.q(j, i) = tr;
    }
  return parts;
}

MVProblem assemble_problem(std::span<const GreekBundle> bundles, const FactorModel& model,
                           std::optional<double> target) {
  VarianceParts parts = variance_parts(bundles, model);
  const Eigen::Index m = parts.q.rows();
  const Eigen::MatrixXd sigma_eff = model.sigma_eff();

  MVProblem pb;
  pb.sigma_hat = std::move(parts.sigma_hat);
  pb.q_matrix = std::move(parts.q);
  pb.h = pb.sigma_hat + pb.q_matrix;
  pb.target = target;

  pb.p.resize(m);
  pb.theta_dt.resize(m);
  pb.values.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    pb.p(k) = 0.5 * bundles[k].gamma.cwiseProduct(sigma_eff).sum();
    pb.theta_dt(k) = bundles[k].theta * model.dt;
    pb.values(k) = bundles[k].value;
  }

  if (!lower_cholesky(pb.h)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pb.h);
    Eigen::VectorXd dir = es.eigenvectors().col(0);
    throw SolverError(Errc::SingularH,
                      "H = sigma_hat + Q is not positive definite (redundant instruments?); "
                      "near-null direction " +
                          format_direction(dir));
  }
  return pb;
}

}  // namespace dgmv
