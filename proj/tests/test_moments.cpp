#include <doctest.h>

#include <cmath>

#include "dgmv/moments.hpp"
#include "test_support.hpp"

using namespace dgmv;

namespace {

QuadraticReduction make_qf(double a, std::initializer_list<double> b,
                           std::initializer_list<double> lambda) {
  QuadraticReduction qf;
  qf.a = a;
  qf.b = Eigen::VectorXd(static_cast<Eigen::Index>(b.size()));
  qf.lambda = Eigen::VectorXd(static_cast<Eigen::Index>(lambda.size()));
  Eigen::Index i = 0;
  for (double v : b) qf.b(i++) = v;
  i = 0;
  for (double v : lambda) qf.lambda(i++) = v;
  return qf;
}

QuadraticReduction random_qf(std::mt19937_64& gen, Eigen::Index n) {
  QuadraticReduction qf;
  qf.a = std::uniform_real_distribution<double>(0.5, 1.5)(gen);
  qf.b = testsup::random_vector(gen, n);
  qf.lambda = testsup::random_vector(gen, n, 0.2, 1.0);
  return qf;
}

}  // namespace

TEST_CASE("mgf exponent fixed points") {
  QuadraticReduction qf = make_qf(0.0, {0.3, -0.7}, {0.4, -0.2});
  CHECK(moments::mgf_exponent(0.0, qf) == 0.0);

  // degenerate Y = a
  QuadraticReduction flat = make_qf(1.0, {0.0}, {0.0});
  CHECK(moments::mgf_exponent(0.5, flat) == doctest::Approx(0.5).epsilon(1e-15));

  // single chi-square term: -(1/2) log(1 - 2*theta*lambda)
  QuadraticReduction chi = make_qf(0.0, {0.0}, {0.5});
  CHECK(moments::mgf_exponent(0.5, chi) ==
        doctest::Approx(0.34657359027997265).epsilon(1e-14));
}

TEST_CASE("mgf domain boundary raises with the binding index") {
  QuadraticReduction qf = make_qf(0.0, {0.0, 0.0}, {0.1, 1.0});
  try {
    moments::mgf_exponent(0.5, qf);  // 1 - 2*0.5*1 = 0
    CHECK(false);
  } catch (const MgfDomainError& e) {
    CHECK(e.binding_index() == 1);
    CHECK(e.code() == Errc::OutOfDomain);
  }

  // negative lambda with negative theta violates the condition too
  QuadraticReduction neg = make_qf(0.0, {0.0}, {-1.0});
  CHECK_THROWS_AS(moments::mgf_exponent(-0.6, neg), MgfDomainError);
  CHECK_NOTHROW(moments::mgf_exponent(0.6, neg));
}

TEST_CASE("mean closed form") {
  CHECK(moments::mean(make_qf(0.0, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0})) == 3.0);
  CHECK(moments::mean(make_qf(2.0, {3.0}, {0.0})) == 2.0);
}

TEST_CASE("variance closed form") {
  CHECK(moments::variance(make_qf(0.0, {0.0, 0.0}, {1.0, 1.0})) == 4.0);
  CHECK(moments::variance(make_qf(0.0, {3.0}, {0.0})) == 9.0);
  // the scalar reduction example: b=4, lambda=2
  CHECK(moments::variance(make_qf(0.0, {4.0}, {2.0})) == 24.0);
}

TEST_CASE("second moment closed form") {
  CHECK(moments::second_moment(make_qf(0.0, {0.0}, {1.0})) == 3.0);
  CHECK(moments::second_moment(make_qf(2.0, {0.0}, {0.0})) == 4.0);

  std::mt19937_64 gen(15);
  for (int rep = 0; rep < 20; ++rep) {
    QuadraticReduction qf = random_qf(gen, 4);
    const double m = moments::mean(qf);
    CHECK(testsup::rel_err(moments::second_moment(qf), m * m + moments::variance(qf)) < 1e-12);
  }
}

TEST_CASE("mgf derivatives at zero reproduce the moments") {
  std::mt19937_64 gen(16);
  for (int rep = 0; rep < 20; ++rep) {
    QuadraticReduction qf = random_qf(gen, 4);
    auto mgf = [&](double t) { return std::exp(moments::mgf_exponent(t, qf)); };

    const double h1 = 1e-5;
    const double fd_mean = (mgf(h1) - mgf(-h1)) / (2.0 * h1);
    CHECK(testsup::rel_err(fd_mean, moments::mean(qf)) < 1e-6);

    const double h2 = 1e-4;
    const double fd_second = (mgf(h2) - 2.0 * mgf(0.0) + mgf(-h2)) / (h2 * h2);
    CHECK(testsup::rel_err(fd_second, moments::second_moment(qf)) < 1e-5);
  }
}

TEST_CASE("variance is nonnegative and vanishes only for a degenerate form") {
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 50; ++rep) {
    QuadraticReduction qf = random_qf(gen, 3);
    CHECK(moments::variance(qf) >= 0.0);
    CHECK(moments::variance(qf) > 0.0);
  }
  CHECK(moments::variance(make_qf(5.0, {0.0, 0.0}, {0.0, 0.0})) == 0.0);
}
