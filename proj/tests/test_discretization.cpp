#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "klt/discretization.hpp"
#include "klt/errors.hpp"

using namespace klt;
using doctest::Approx;

namespace {

CylinderGrid grid(GnsMode mode, int n, int m, int d = 2) {
  CylinderGrid g;
  g.mode = mode;
  g.s = symmetric_grid(8.0, n);
  g.m = m;
  g.d = d;
  g.lambda1 = d - 1.0;
  g.p = 4.0;
  return g;
}

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> u(n);
  for (auto& x : u) x = dist(rng);
  return u;
}

}  // namespace

TEST_CASE("Gauss-Gegenbauer quadrature is exact on polynomials") {
  for (int d : {2, 3, 4, 5}) {
    const int count = 6;
    const auto quad = sphere_coordinate_quadrature(d, count);
    for (int k = 0; k < 2 * count; ++k) {
      CAPTURE(d);
      CAPTURE(k);
      // moments of a coordinate on S^{d-1}: E t^(2j) = prod_{i<j} (2i+1)/(d+2i)
      double exact = k % 2 == 0 ? 1.0 : 0.0;
      if (k % 2 == 0)
        for (int i = 0; i < k / 2; ++i) exact *= (2.0 * i + 1.0) / (d + 2.0 * i);
      double sum = 0.0;
      for (int j = 0; j < count; ++j) sum += quad.weights[j] * std::pow(quad.nodes[j], k);
      CHECK(sum == Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("first harmonic has unit norm") {
  for (int d : {2, 3, 6}) {
    const Discretization disc(grid(GnsMode::two_mode, 32, 10, d));
    double s = 0.0;
    for (int j = 0; j < 10; ++j) s += disc.quadrature().weights[j] * disc.harmonic()[j] * disc.harmonic()[j];
    CHECK(s == Approx(1.0).epsilon(1e-12));
  }
  const Discretization circle(grid(GnsMode::general2d, 32, 8));
  double s = 0.0;
  for (double x : circle.harmonic()) s += x * x / 8.0;
  CHECK(s == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("precondition inverts apply and apply represents the energy") {
  for (GnsMode mode : {GnsMode::symmetric, GnsMode::general2d, GnsMode::two_mode}) {
    CAPTURE(to_string(mode));
    const Discretization disc(grid(mode, 64, mode == GnsMode::two_mode ? 8 : 16, mode == GnsMode::two_mode ? 3 : 2));
    const auto u = random_field(disc.size(), 1);
    for (double lambda : {0.3, 4.0}) {
      std::vector<double> au(u.size());
      disc.apply(u.data(), lambda, au.data());
      CHECK(disc.inner(u.data(), au.data()) ==
            Approx(disc.dirichlet(u.data()) + lambda * disc.l2_sq(u.data())).epsilon(1e-12));
      disc.precondition(lambda, au.data());
      double err = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::fabs(au[i] - u[i]));
      CHECK(err <= 1e-10);
    }
  }
}

TEST_CASE("nonlinear term is the derivative of the L^p energy") {
  for (GnsMode mode : {GnsMode::symmetric, GnsMode::general2d, GnsMode::two_mode}) {
    CAPTURE(to_string(mode));
    const Discretization disc(grid(mode, 40, 8, mode == GnsMode::two_mode ? 4 : 2));
    const auto u = random_field(disc.size(), 2);
    const auto v = random_field(disc.size(), 3);
    std::vector<double> nu(u.size());
    disc.nonlinear(u.data(), nu.data());
    const double t = 1e-5;
    auto shifted = [&](double s) {
      std::vector<double> w = u;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += s * v[i];
      return disc.lp_pow(w.data());
    };
    const double fd = (shifted(t) - shifted(-t)) / (2.0 * t);
    CHECK(fd == Approx(disc.grid().p * disc.inner(nu.data(), v.data())).epsilon(1e-7));
  }
}

TEST_CASE("spectral angular derivatives and energy") {
  const int n = 50, m = 16;
  const Discretization disc(grid(GnsMode::general2d, n, m));
  const auto& g = disc.grid();
  std::vector<double> u(disc.size()), d1(disc.size()), d2(disc.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      u[i * m + j] = std::exp(-g.s.node(i) * g.s.node(i)) * (1.0 + std::cos(3.0 * th) + 0.5 * std::sin(2.0 * th));
    }
  disc.angular_derivative(u.data(), 1, d1.data());
  disc.angular_derivative(u.data(), 2, d2.data());
  double e1 = 0.0, e2 = 0.0, fd_energy = 0.0, ang = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = std::exp(-g.s.node(i) * g.s.node(i));
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * M_PI * j / m;
      e1 = std::max(e1, std::fabs(d1[i * m + j] - f * (-3.0 * std::sin(3.0 * th) + std::cos(2.0 * th))));
      e2 = std::max(e2, std::fabs(d2[i * m + j] - f * (-9.0 * std::cos(3.0 * th) - 2.0 * std::sin(2.0 * th))));
      ang += g.s.h() / m * d1[i * m + j] * d1[i * m + j];
    }
    // mean of (-3 sin 3t + cos 2t)^2 over the circle
    fd_energy += g.s.h() * f * f * (4.5 + 0.5);
  }
  CHECK(e1 <= 1e-12);
  CHECK(e2 <= 1e-11);
  CHECK(ang == Approx(fd_energy).epsilon(1e-12));

  // s part of the angular energy uses the same differences as the full one
  std::vector<double> sym(disc.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) sym[i * m + j] = u[i * m + j] - std::exp(-g.s.node(i) * g.s.node(i));
  CHECK(disc.angular_dirichlet(u.data()) == Approx(disc.dirichlet(sym.data())).epsilon(1e-12));
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(Discretization(grid(GnsMode::general2d, 40, 5)), ValidationError);
  CHECK_THROWS_AS(Discretization(grid(GnsMode::general2d, 40, 2)), ValidationError);
  CHECK_THROWS_AS(sphere_coordinate_quadrature(1, 4), ValidationError);
  CHECK(parse_gns_mode("two_mode") == GnsMode::two_mode);
  CHECK_THROWS_AS(parse_gns_mode("spiral"), ValidationError);
}
