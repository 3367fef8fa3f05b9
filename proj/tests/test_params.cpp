#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "klt/errors.hpp"
#include "klt/params.hpp"

using namespace klt;
using doctest::Approx;

TEST_CASE("exponents") {
  const auto a = make_params(2, 2.0);
  CHECK(a.p == 4.0);
  CHECK(a.beta == Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(a.gamma == 1.0);
  const auto b = make_params(3, 3.0);
  CHECK(b.p == Approx(3.0).epsilon(1e-15));
  CHECK(b.beta == Approx(1.2).epsilon(1e-15));
  CHECK_THROWS_AS(make_params(3, 1.4), ValidationError);
  CHECK_THROWS_AS(make_params(1, 2.0), ValidationError);
}

TEST_CASE("mu_one against quadrature of the sech^2 profile") {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double q : {1.5, 2.0, 3.0, 4.5}) {
    CAPTURE(q);
    // ||q(q-1) sech^2||_q with t = tanh s: integral of sech^(2q) ds = integral (1-t^2)^(q-1) dt
    const double integral = integrator.integrate([q](double t) { return std::pow(1.0 - t * t, q - 1.0); }, -1.0, 1.0);
    CHECK(mu_one(q) == Approx(q * (q - 1.0) * std::pow(integral, 1.0 / q)).epsilon(1e-12));
  }
  CHECK(mu_one(2.0) == Approx(4.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(mu_one(3.0) == Approx(6.0 * std::cbrt(16.0 / 15.0)).epsilon(1e-14));
}

TEST_CASE("lambda_R and its inverse") {
  for (double q : {2.0, 3.0}) {
    const double m1 = mu_one(q);
    CHECK(lambda_R(m1, q) == Approx((q - 1) * (q - 1)).epsilon(1e-14));
    CHECK(invert_lambda_R((q - 1) * (q - 1), q) == Approx(m1).epsilon(1e-14));
  }
  CHECK(lambda_R(std::pow(2.0, 3.0 / 4.0) * mu_one(2.0), 2.0) == Approx(2.0).epsilon(1e-14));
  for (double mu : {1e-3, 0.4, 1.0, 7.0, 300.0}) CHECK(invert_lambda_R(lambda_R(mu, 2.5), 2.5) == Approx(mu).epsilon(1e-13));
  CHECK_THROWS_AS(lambda_R(0.0, 2.0), ValidationError);
}

TEST_CASE("optimal family") {
  const auto v = optimal_potential(mu_one(2.0), 2.0);
  CHECK(v(0.0) == Approx(2.0).epsilon(1e-14));
  CHECK(v(1.3) == Approx(2.0 / std::pow(std::cosh(1.3), 2)).epsilon(1e-14));
  const auto phi = optimal_eigenfunction(mu_one(3.0), 3.0);
  CHECK(phi(0.0) == 1.0);
  for (double mu : {0.3, 2.0, 11.0}) {
    const auto e = optimal_eigenfunction(mu, 2.0);
    CHECK(e.decay_rate() == Approx(std::sqrt(lambda_R(mu, 2.0))).epsilon(1e-13));
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double mu : {0.5, 2.0, 9.0}) {
    const auto w = optimal_potential(mu, 2.5);
    const double norm =
        std::pow(integrator.integrate([&](double s) { return std::pow(w(s), 2.5); },
                                      -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()),
                 1.0 / 2.5);
    CHECK(norm == Approx(mu).epsilon(1e-8));
  }
}

TEST_CASE("curvature-dimension constants") {
  const auto rp = make_rigidity(2, 4.0, 0.0, 1.0);
  CHECK(rp.delta == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lambda_theta(rp, 0.0) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(theta_star(rp) == 0.0);
  CHECK_THROWS_AS(lambda_theta(make_rigidity(2, 4.0, 1.0, 1.0), 0.0), ValidationError);

  CHECK(theta_star_exact(3, Rational(6)) == Rational(-125, 124));
  CHECK(theta_star(make_rigidity(3, 6.0, 1.0, 2.0)) == Approx(-125.0 / 124.0).epsilon(1e-14));

  // lambda_0 = kappa + delta lambda1
  const auto r3 = make_rigidity(3, 5.0, 0.7, 2.5);
  CHECK(lambda_theta(r3, 0.0) == Approx(r3.kappa + r3.delta * r3.lambda1).epsilon(1e-14));
  CHECK(lambda_theta_exact(3, Rational(5), Rational(7, 10), Rational(5, 2), Rational(0)).to_double() ==
        Approx(lambda_theta(r3, 0.0)).epsilon(1e-14));
}

TEST_CASE("threshold bounds") {
  const auto params = make_params(2, 2.0);
  const auto b = mu_star_bounds(make_rigidity(params, 0.0, 1.0), params);
  CHECK(b.upper == Approx(mu_one(2.0) * std::pow(3.0, -0.75)).epsilon(1e-14));
  CHECK(b.lower == Approx(b.upper).epsilon(1e-14));
  CHECK(lambda_R(b.upper, params) == Approx(1.0 / 3.0).epsilon(1e-14));

  for (int d = 3; d <= 6; ++d)
    for (int q = 2; q <= 6; ++q) {
      if (2 * q <= d) continue;
      CAPTURE(d);
      CAPTURE(q);
      const auto id = sphere_identity_exact(d, q);
      CHECK(id.lhs == id.rhs);
      const auto pr = make_params(d, q);
      const auto bb = mu_star_bounds(make_rigidity(pr, d - 2.0, d - 1.0), pr);
      CHECK(bb.lower == Approx(bb.upper).epsilon(1e-12));
    }
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(INT64_MAX) * Rational(2));
}
