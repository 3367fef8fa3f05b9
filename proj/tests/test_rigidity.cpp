#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "klt/errors.hpp"
#include "klt/rigidity.hpp"

using namespace klt;
using doctest::Approx;

namespace {

const ManifoldSpec& circle() {
  static const ManifoldSpec s = sphere_spec(2, 8);
  return s;
}

CylinderPotential family(double mu, double q, int n = 4001) {
  return CylinderPotential::symmetric(sample_potential(optimal_family_grid(mu, q, n), optimal_potential(mu, q)));
}

}  // namespace

TEST_CASE("pressure of the optimal family is a quadratic in r") {
  const double q = 2.0, mu = 1.7;
  const auto params = make_params(2, q);
  const auto pd = pressure_from_potential(family(mu, q), mu, params);
  const double nu = optimal_scale(mu, q);
  CHECK(pd.alpha == Approx(nu).epsilon(1e-13));
  for (int i = pd.row_lo; i < pd.row_hi; i += 100) {
    const double r = std::exp(-pd.alpha * pd.grid.node(i));
    CHECK(pd.p_vals[i] == Approx((r * r + 1.0) / (2.0 * nu * std::sqrt(q * (q - 1.0)))).epsilon(1e-10));
  }
}

TEST_CASE("K vanishes on the optimal family") {
  for (double q : {2.0, 3.0}) {
    const auto params = make_params(2, q);
    const auto rp = make_rigidity(params, 0.0, 1.0);
    for (double f : {0.5, 1.0, 2.0}) {
      const double mu = f * mu_one(q);
      CAPTURE(q);
      CAPTURE(mu);
      const auto t = evaluate_K_terms(family(mu, q, 8001), mu, params, rp, circle());
      CHECK(std::fabs(t.total) <= 1e-6);
      CHECK(t.mixed == 0.0);
      CHECK(t.angular == 0.0);
    }
  }
}

TEST_CASE("K is positive on symmetric non-optimal potentials") {
  const auto params = make_params(2, 2.0);
  const auto rp = make_rigidity(params, 0.0, 1.0);
  const auto g = symmetric_grid(6.0, 2001);
  for (double width : {0.7, 1.5}) {
    const auto v = CylinderPotential::symmetric(sample_potential(g, [width](double s) { return 2.0 * std::exp(-s * s / width); }));
    const double mu = v.lq_norm(params.q);
    const auto t = evaluate_K_terms(v, mu, params, rp, circle());
    CHECK(t.total > 1e-4);
    CHECK(t.total == Approx(t.second_order));
  }
}

TEST_CASE("angular coefficient changes sign at the lower threshold bound") {
  for (int d : {2, 3, 4}) {
    const auto m = sphere_spec(d, 3);
    const auto params = make_params(d, d / 2.0 + 1.0);
    const auto rp = make_rigidity(params, d == 2 ? 0.0 : m.kappa(), m.lambda1());
    const double lower = mu_star_bounds(rp, params).lower;
    const auto coefficient = [&](double mu) {
      return evaluate_K_terms(family(mu, params.q, 401), mu, params, rp, m).coefficient;
    };
    CAPTURE(d);
    CHECK(coefficient(0.99 * lower) > 0.0);
    CHECK(coefficient(1.01 * lower) < 0.0);
    CHECK(std::fabs(coefficient(lower)) <= 1e-12);
  }
}

TEST_CASE("pressure input validation") {
  const auto params = make_params(2, 2.0);
  const auto g = symmetric_grid(6.0, 401);
  const auto negative = CylinderPotential::symmetric(sample_potential(g, [](double s) { return 1.0 - s * s; }));
  CHECK_THROWS_AS(pressure_from_potential(negative, 1.0, params), ValidationError);
  const auto split = CylinderPotential::symmetric(
      sample_potential(g, [](double s) { return std::exp(-std::pow(s - 3.0, 2)) + std::exp(-std::pow(s + 3.0, 2)) - 0.0 * s; }));
  auto holes = split;
  for (int i = 0; i < g.n; ++i)
    if (std::fabs(g.node(i)) < 0.5) holes.values[i] = 0.0;
  CHECK_THROWS_AS(pressure_from_potential(holes, 1.0, params), ValidationError);
}
