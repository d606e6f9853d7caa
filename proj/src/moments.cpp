#include "dgmv/moments.hpp"

#include <cmath>
#include <string>

namespace dgmv::moments {

double mgf_exponent(double theta, const QuadraticReduction& qf) {
  double eta = qf.a * theta;
  for (Eigen::Index j = 0; j < qf.n(); ++j) {
    const double denom = 1.0 - 2.0 * theta * qf.lambda(j);
    if (!(denom > 0.0))
      throw MgfDomainError("mgf undefined: 1 - 2*theta*lambda_" + std::to_string(j) +
                               " = " + std::to_string(denom) + " at theta = " +
                               std::to_string(theta),
                           static_cast<int>(j));
    eta += 0.5 * (theta * theta * qf.b(j) * qf.b(j) / denom - std::log(denom));
  }
  return eta;
}

double mean(const QuadraticReduction& qf) { return qf.a + qf.lambda.sum(); }

double variance(const QuadraticReduction& qf) {
  return qf.b.squaredNorm() + 2.0 * qf.lambda.squaredNorm();
}

double second_moment(const QuadraticReduction& qf) {
  const double m = mean(qf);
  return m * m + variance(qf);
}

}  // namespace dgmv::moments
