#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "klt/errors.hpp"
#include "klt/gns.hpp"

using namespace klt;
using doctest::Approx;

namespace {

const ManifoldSpec& circle() {
  static const ManifoldSpec s = sphere_spec(2, 12);
  return s;
}

const InequalityParams& params() {
  static const InequalityParams p = make_params(2, 2.0);
  return p;
}

GnsConfig fast_config() {
  GnsConfig c;
  c.n_s = 401;
  return c;
}

double quotient(const Discretization& disc, const std::vector<double>& u, double lambda) {
  const double p = disc.grid().p;
  return (disc.dirichlet(u.data()) + lambda * disc.l2_sq(u.data())) / std::pow(disc.lp_pow(u.data()), 2.0 / p);
}

GnsState make_state(const CylinderGrid& g, std::vector<double> u) {
  GnsState s;
  s.grid = g;
  s.u = std::move(u);
  return s;
}

}  // namespace

TEST_CASE("discrete gradient of the quotient matches finite differences") {
  const double lambda = 0.7;
  for (GnsMode mode : {GnsMode::general2d, GnsMode::two_mode}) {
    CAPTURE(to_string(mode));
    GnsConfig c = fast_config();
    c.n_s = 101;
    const ManifoldSpec m = mode == GnsMode::two_mode ? sphere_spec(3, 4) : circle();
    const auto pr = mode == GnsMode::two_mode ? make_params(3, 2.0) : params();
    const Discretization disc(design_grid(mode, lambda, pr, m, c));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    std::vector<double> u(disc.size());
    for (auto& x : u) x = 1.0 + 0.3 * gauss(rng);

    // dQ[v] = 2 (<Au, v> - Q ||u||_p^(2-p) <N(u), v>) / ||u||_p^2
    const double p = disc.grid().p;
    const double lp = disc.lp_pow(u.data());
    const double q0 = quotient(disc, u, lambda);
    std::vector<double> au(u.size()), nu(u.size()), grad(u.size());
    disc.apply(u.data(), lambda, au.data());
    disc.nonlinear(u.data(), nu.data());
    for (std::size_t i = 0; i < u.size(); ++i)
      grad[i] = 2.0 * (au[i] - q0 * std::pow(lp, 2.0 / p - 1.0) * nu[i]) / std::pow(lp, 2.0 / p);

    for (int k = 0; k < 10; ++k) {
      std::vector<double> v(u.size());
      for (auto& x : v) x = gauss(rng);
      const double t = 1e-4;
      std::vector<double> plus = u, minus = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        plus[i] += t * v[i];
        minus[i] -= t * v[i];
      }
      const double fd = (quotient(disc, plus, lambda) - quotient(disc, minus, lambda)) / (2.0 * t);
      CHECK(disc.inner(grad.data(), v.data()) == Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("symmetric optimum follows the closed form") {
  const auto c = fast_config();
  for (double lambda : {0.2, 1.0, 3.0}) {
    const auto r = gns_constant(lambda, params(), circle(), GnsMode::symmetric, c);
    CHECK(r.mu == Approx(invert_lambda_R(lambda, params())).epsilon(1e-3));
    CHECK(r.state.gradient_norm <= c.tol);
  }
  // at lambda = 1 the minimizer is proportional to 1/cosh
  const auto r = gns_constant(1.0, params(), circle(), GnsMode::symmetric, c);
  const auto& g = r.state.grid.s;
  const int mid = g.n / 2;
  for (int i = 0; i < g.n; i += 40)
    CHECK(std::fabs(r.state.u[i] / r.state.u[mid] - 1.0 / std::cosh(g.node(i))) <= 1e-3);
}

TEST_CASE("mu(lambda) is nondecreasing and symmetry breaks at large lambda") {
  const auto c = fast_config();
  double previous = 0.0;
  for (double lambda : {0.1, 0.25, 0.5, 1.0, 2.0}) {
    const double mu = gns_constant(lambda, params(), circle(), GnsMode::general2d, c).mu;
    CHECK(mu >= previous);
    previous = mu;
  }
  const double lambda = 10.0;
  const auto sym = gns_constant(lambda, params(), circle(), GnsMode::symmetric, c);
  const auto gen = gns_constant(lambda, params(), circle(), GnsMode::general2d, c);
  CHECK(gen.mu < sym.mu * (1.0 - 1e-3));
  CHECK(symmetry_fraction(gen.state) > 1e-2);
  CHECK_FALSE(gen.state.symmetric_fallback);
}

TEST_CASE("duality with the potential functional") {
  const auto c = fast_config();
  for (GnsMode mode : {GnsMode::symmetric, GnsMode::general2d}) {
    for (double lambda : {0.2, 2.0}) {
      CAPTURE(lambda);
      const auto r = gns_constant(lambda, params(), circle(), mode, c);
      const auto v = potential_from_state(r.state, r.mu, params());
      CHECK(v.lq_norm(params().q) == Approx(r.mu).epsilon(1e-8));
      CHECK(std::fabs(evaluate_J(v, params(), circle()) - lambda) <= 1e-3);
    }
  }
}

TEST_CASE("potential functional on the line family") {
  const double q = 2.0;
  const auto g = optimal_family_grid(1.0, q, 4001);
  const auto v = CylinderPotential::symmetric(sample_potential(g, optimal_potential(1.0, q)));
  CHECK(evaluate_J(v, params(), circle()) == Approx(lambda_R(1.0, q)).epsilon(1e-3));

  // J[nu^2 V(nu s)] = nu^2 J[V]
  const double j1 = evaluate_J(v, params(), circle());
  const auto scaled = CylinderPotential::symmetric(scale_potential(v.line(), 2.0));
  CHECK(evaluate_J(scaled, params(), circle()) / j1 == Approx(4.0).epsilon(1e-6));

  const auto plateau = sample_potential(symmetric_grid(12.0, 2401), [](double s) { return std::fabs(s) < 2.0 ? 0.5 : 0.0; });
  const double j = evaluate_J(CylinderPotential::symmetric(plateau), params(), circle());
  CHECK(std::isfinite(j));
  CHECK(j < lambda_R(lq_norm_1d(plateau, q), q));
}

TEST_CASE("symmetry fraction") {
  const auto c = fast_config();
  const auto g = design_grid(GnsMode::general2d, 1.0, params(), circle(), c);
  std::vector<double> sym(g.size()), mod(g.size());
  for (int i = 0; i < g.s.n; ++i)
    for (int j = 0; j < g.m; ++j) {
      const double phi = 1.0 / std::cosh(g.s.node(i));
      sym[i * g.m + j] = phi;
      mod[i * g.m + j] = phi * (1.0 + 0.3 * std::cos(2.0 * M_PI * j / g.m));
    }
  CHECK(symmetry_fraction(make_state(g, sym)) <= 1e-14);
  const double f = symmetry_fraction(make_state(g, mod));
  CHECK(f > 0.0);
  // fraction = 0.045 (|d_s phi|^2 + |phi|^2) / (|d_s phi|^2 + 1.045 |d_s phi|^2 + 0.045 |phi|^2)
  // with |d_s phi|^2 = 2/3 |phi|^2 for phi = sech
  const double ds = 2.0 / 3.0, l2 = 2.0;
  const double exact = 0.045 * (ds * l2 / 2.0 + l2) / (1.045 * ds * l2 / 2.0 + 0.045 * l2);
  CHECK(f == Approx(exact).epsilon(1e-3));
}

TEST_CASE("threshold search") {
  GnsConfig c = fast_config();
  c.threshold_tol = 2.0;
  const auto degenerate = threshold_search(params(), circle(), c);
  CHECK(degenerate.mu_lo == Approx(0.5 * degenerate.reference).epsilon(1e-14));
  CHECK(degenerate.mu_hi == Approx(1.5 * degenerate.reference).epsilon(1e-14));

  const auto r = threshold_search(params(), circle(), fast_config());
  const double star = mu_one(2.0) * std::pow(3.0, -0.75);
  CHECK(r.mu_lo <= star * 1.02);
  CHECK(r.mu_hi >= star * 0.98);
  CHECK(r.mu_hi - r.mu_lo <= 0.02 * star);
  CHECK(instability_coefficient(r.mu_lo, params(), circle()) > 0.0);
  CHECK(instability_coefficient(r.mu_hi, params(), circle()) < 0.0);
  CHECK(r.method == "general2d");
}

TEST_CASE("Lambda(mu) against the line value") {
  const auto c = fast_config();
  const double star = instability_threshold(params(), circle());
  const auto below = capital_lambda(0.8 * star, params(), circle(), GnsMode::general2d, c);
  CHECK(below.value == Approx(lambda_R(0.8 * star, params())).epsilon(1e-3));
  const auto above = capital_lambda(1.3 * star, params(), circle(), GnsMode::general2d, c);
  CHECK(above.value - above.lambda_R > above.tolerance);
  CHECK(above.value >= above.lambda_R);
}

TEST_CASE("config parsing") {
  const auto c = parse_gns_config("# tuned\nn_s = 601\ntol=1e-8\n\nstarts = 5  # more\n");
  CHECK(c.n_s == 601);
  CHECK(c.tol == 1e-8);
  CHECK(c.starts == 5);
  CHECK(c.window == GnsConfig{}.window);
  CHECK_THROWS_AS(parse_gns_config("colour = red\n"), ValidationError);
  CHECK_THROWS_AS(parse_gns_config("n_s = 1.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_gns_config("n_s 601\n"), ValidationError);
  CHECK_THROWS_AS(parse_gns_config("m_min = 6\n"), ValidationError);
  CHECK_THROWS_AS(load_gns_config("/nonexistent/config.txt"), IoError);
}
