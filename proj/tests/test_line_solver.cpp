#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "klt/line_solver.hpp"
#include "klt/params.hpp"

using namespace klt;
using doctest::Approx;

namespace {

SampledPotential1D sech2(double amplitude, const Grid1D& g) {
  return sample_potential(g, [amplitude](double s) { return amplitude / std::pow(std::cosh(s), 2); });
}

// Radial finite-volume minimization of (||grad w||^2 + ||w||^2) / ||w||_p^2 on
// R^2 by Petviashvili iteration; an oracle independent of the shooting solver.
double radial_oracle_constant(double p, int n, double r_max) {
  const double h = r_max / n;
  std::vector<double> r(n), w(n), rhs(n), sub(n), diag(n), sup(n);
  for (int i = 0; i < n; ++i) {
    r[i] = (i + 0.5) * h;
    w[i] = std::exp(-r[i] * r[i] / 4.0);
  }
  // (A w)_i = [r_{i+1/2}(w_i - w_{i+1}) + r_{i-1/2}(w_i - w_{i-1})] / (h^2 r_i) + w_i
  for (int i = 0; i < n; ++i) {
    const double rp = r[i] + 0.5 * h, rm = r[i] - 0.5 * h;
    diag[i] = (rp + rm) / (h * h * r[i]) + 1.0;
    sub[i] = -rm / (h * h * r[i]);
    sup[i] = -rp / (h * h * r[i]);
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += sub[i] * x[i - 1];
      if (i + 1 < n) y[i] += sup[i] * x[i + 1];
    }
  };
  auto solve = [&](std::vector<double> b) {
    std::vector<double> c(n), x(n);
    double den = diag[0];
    c[0] = sup[0] / den;
    b[0] /= den;
    for (int i = 1; i < n; ++i) {
      den = diag[i] - sub[i] * c[i - 1];
      c[i] = sup[i] / den;
      b[i] = (b[i] - sub[i] * b[i - 1]) / den;
    }
    x[n - 1] = b[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = b[i] - c[i] * x[i + 1];
    return x;
  };
  auto integrate = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += 2.0 * M_PI * r[i] * h * f[i];
    return s;
  };
  const double gamma = (p - 1.0) / (p - 2.0);
  std::vector<double> aw(n), np(n), prod(n);
  for (int it = 0; it < 500; ++it) {
    apply(w, aw);
    for (int i = 0; i < n; ++i) {
      np[i] = std::pow(w[i], p - 1.0);
      prod[i] = w[i] * aw[i];
    }
    const double num = integrate(prod);
    for (int i = 0; i < n; ++i) prod[i] = w[i] * np[i];
    const double factor = std::pow(num / integrate(prod), gamma);
    auto next = solve(np);
    for (int i = 0; i < n; ++i) w[i] = factor * next[i];
  }
  apply(w, aw);
  for (int i = 0; i < n; ++i) {
    prod[i] = w[i] * aw[i];
    np[i] = std::pow(w[i], p);
  }
  const double quotient = integrate(prod) / std::pow(integrate(np), 2.0 / p);
  return std::pow(quotient, -p / (p - 2.0));
}

}  // namespace

TEST_CASE("sech^2 wells have the closed-form ground state") {
  const auto g = symmetric_grid(20.0, 4000);
  const auto r2 = ground_state_1d(sech2(2.0, g));
  CHECK(std::fabs(r2.extrapolated + 1.0) <= 1e-5);
  CHECK(r2.lambda1_extrapolated() == Approx(1.0).epsilon(1e-5));
  const auto r3 = ground_state_1d(sech2(6.0, g));
  CHECK(std::fabs(r3.extrapolated + 4.0) <= 1e-5);
  for (double x : r2.eigenfunction) CHECK(x >= 0.0);
}

TEST_CASE("free operator has no negative spectrum") {
  const auto g = symmetric_grid(10.0, 200);
  const auto r = ground_state_1d(sample_potential(g, [](double) { return 0.0; }));
  CHECK(r.eigenvalue >= 0.0);
  CHECK(r.lambda1 == 0.0);
}

TEST_CASE("second-order convergence and Richardson error bound") {
  std::vector<double> err;
  std::vector<double> est;
  for (int n : {499, 999, 1999}) {
    const auto r = ground_state_1d(sech2(2.0, symmetric_grid(20.0, n)));
    err.push_back(std::fabs(r.eigenvalue + 1.0));
    est.push_back(r.error_estimate);
  }
  CHECK(err[0] / err[1] == Approx(4.0).epsilon(0.05));
  CHECK(err[1] / err[2] == Approx(4.0).epsilon(0.05));
  for (std::size_t i = 0; i < err.size(); ++i) {
    CHECK(est[i] <= 4.0 * err[i]);
    CHECK(err[i] <= 4.0 * est[i]);
  }
}

TEST_CASE("optimal eigenfunction residual decays like h^2") {
  const double q = 2.0;
  const double mu = mu_one(q);
  const auto phi = optimal_eigenfunction(mu, q);
  const auto v = optimal_potential(mu, q);
  std::vector<double> res;
  for (int n : {400, 800, 1600}) {
    const auto g = symmetric_grid(20.0, n);
    const double h = g.h();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.node(i);
      const double lap = (phi(x - h) - 2.0 * phi(x) + phi(x + h)) / (h * h);
      const double r = -lap - v(x) * phi(x) + phi(x);
      s += h * r * r;
    }
    res.push_back(std::sqrt(s));
  }
  CHECK(res[0] / res[1] == Approx(4.0).epsilon(0.05));
  CHECK(res[1] / res[2] == Approx(4.0).epsilon(0.05));
}

TEST_CASE("translation invariance for grid-aligned shifts") {
  const auto g = symmetric_grid(30.0, 2999);
  const double shift = 25 * g.h();
  const auto a = ground_state_1d(sech2(2.0, g));
  const auto b = ground_state_1d(sample_potential(g, [shift](double s) { return 2.0 / std::pow(std::cosh(s - shift), 2); }));
  CHECK(std::fabs(a.eigenvalue - b.eigenvalue) <= 1e-8);
}

TEST_CASE("eigenvalue is monotone in the potential") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = symmetric_grid(15.0, 600);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.2 + 3.0 * u(rng), w = 0.3 + 2.0 * u(rng), c = 4.0 * u(rng) - 2.0, extra = u(rng);
    const auto lower = sample_potential(g, [=](double s) { return a * std::exp(-std::pow((s - c) / w, 2)); });
    auto upper = lower;
    for (int i = 0; i < g.n; ++i) upper.values[i] += extra * std::exp(-std::pow(g.node(i) / 2.0, 2));
    CHECK(bottom_eigenvalue(lower.values, g.h()) >= bottom_eigenvalue(upper.values, g.h()));
  }
}

TEST_CASE("norms and scaling") {
  const auto g = symmetric_grid(20.0, 4000);
  const auto v1 = sech2(2.0, g);
  CHECK(lq_norm_1d(v1, 2.0) == Approx(4.0 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(lq_norm_1d(sample_potential(g, [](double) { return 0.0; }), 2.0) == 0.0);
  const auto plateau = sample_potential(symmetric_grid(10.0, 1999), [](double s) { return std::fabs(s) <= 2.0 ? 3.0 : 0.0; });
  CHECK(lq_norm_1d(plateau, 2.0) == Approx(3.0 * std::sqrt(4.0)).epsilon(5e-3));

  const auto same = scale_potential(v1, 1.0);
  CHECK(same.values == v1.values);
  CHECK(lq_norm_1d(scale_potential(v1, 2.0), 2.0) / lq_norm_1d(v1, 2.0) == Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("Keller gap") {
  const double q = 2.0;
  for (double mu : {0.5, 2.0, 5.0}) {
    const auto g = optimal_family_grid(mu, q, 4001);
    const auto v = sample_potential(g, optimal_potential(mu, q));
    CHECK(std::fabs(keller_gap(v, q)) <= 1e-4);
  }
  const auto g = symmetric_grid(20.0, 2000);
  for (double amp : {0.1, 1.0, 10.0}) {
    const auto bump = sample_potential(g, [amp](double s) { return amp * std::exp(-s * s); });
    CHECK(keller_gap(bump, q) > 0.0);
  }
  CHECK(keller_gap(sample_potential(g, [](double) { return 0.0; }), q) == 0.0);
}

TEST_CASE("radial constant: d = 1 closed form") {
  // on the line Lambda_R(mu)^gamma / mu^q is constant, gamma = q - 1/2
  for (double q : {2.0, 3.0}) {
    const double p = 2.0 * q / (q - 1.0);
    const double closed = std::pow(lambda_R(1.0, q), q - 0.5);
    CHECK(radial_gns_constant(1, p) == Approx(closed).epsilon(1e-6));
  }
  const auto prof = radial_ground_state(1, 4.0);
  // w = sqrt2 sech(r)
  CHECK(prof.w0 == Approx(std::sqrt(2.0)).epsilon(1e-8));
  for (std::size_t i = 0; i < prof.r.size(); i += 50)
    if (prof.r[i] < 8.0) CHECK(prof.w[i] == Approx(std::sqrt(2.0) / std::cosh(prof.r[i])).epsilon(1e-5));
}

TEST_CASE("radial constant: d = 2 against a finite-volume oracle") {
  const double shooting = radial_gns_constant(2, 4.0);
  const double oracle = radial_oracle_constant(4.0, 3000, 30.0);
  CHECK(shooting == Approx(oracle).epsilon(1e-2));
  CHECK(1.0 / shooting == Approx(23.4).epsilon(1e-2));
}
