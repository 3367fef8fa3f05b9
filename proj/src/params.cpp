#include "klt/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "klt/errors.hpp"

namespace klt {

InequalityParams make_params(int d, double q) {
  if (d < 2) throw ValidationError("d must be >= 2 (got " + std::to_string(d) + ")");
  if (!std::isfinite(q) || q <= 0.5 * d)
    throw ValidationError("q must satisfy q > d/2 = " + std::to_string(0.5 * d) + " (got " +
                          std::to_string(q) + ")");
  InequalityParams params;
  params.d = d;
  params.q = q;
  params.p = exponent_p(q);
  params.beta = exponent_beta(q);
  params.gamma = q - 0.5 * d;
  return params;
}

double exponent_p(double q) { return 2.0 * q / (q - 1.0); }
double exponent_beta(double q) { return 2.0 * q / (2.0 * q - 1.0); }

double mu_one(double q) {
  if (!(q > 1.0)) throw ValidationError("mu_1 requires q > 1");
  const double log_ratio = 0.5 * std::log(std::numbers::pi) + std::lgamma(q) - std::lgamma(q + 0.5);
  return q * (q - 1.0) * std::exp(log_ratio / q);
}

double lambda_R(double mu, double q) {
  if (!(mu > 0.0)) throw ValidationError("Lambda_R requires mu > 0");
  return (q - 1.0) * (q - 1.0) * std::pow(mu / mu_one(q), exponent_beta(q));
}

double invert_lambda_R(double lambda, double q) {
  if (!(lambda > 0.0)) throw ValidationError("inverse of Lambda_R requires lambda > 0");
  return mu_one(q) * std::pow(lambda / ((q - 1.0) * (q - 1.0)), 1.0 / exponent_beta(q));
}

double optimal_scale(double mu, double q) {
  if (!(mu > 0.0)) throw ValidationError("optimal family requires mu > 0");
  return std::pow(mu / mu_one(q), q / (2.0 * q - 1.0));
}

double OptimalPotential::operator()(double s) const {
  const double c = std::cosh(nu * s);
  return nu * nu * q * (q - 1.0) / (c * c);
}

double OptimalEigenfunction::operator()(double s) const {
  // cosh^(1-q) = exp((1-q) log cosh), written to stay finite for large |s|
  const double x = std::fabs(nu * s);
  const double log_cosh = x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
  return std::exp((1.0 - q) * log_cosh);
}

OptimalPotential optimal_potential(double mu, double q) { return {q, optimal_scale(mu, q)}; }
OptimalEigenfunction optimal_eigenfunction(double mu, double q) { return {q, optimal_scale(mu, q)}; }

RigidityParams make_rigidity(int d, double n, double kappa, double lambda1) {
  if (d < 2) throw ValidationError("d must be >= 2");
  if (n == 1.0) throw ValidationError("n = 1 makes delta singular");
  if (!(lambda1 > 0.0)) throw ValidationError("lambda1 of M must be positive");
  RigidityParams rp;
  rp.d = d;
  rp.n = n;
  rp.delta = (n - d) / ((d - 1.0) * (n - 1.0));
  rp.kappa = kappa;
  rp.lambda1 = lambda1;
  return rp;
}

RigidityParams make_rigidity(const InequalityParams& params, double kappa, double lambda1) {
  return make_rigidity(params.d, 2.0 * params.q, kappa, lambda1);
}

double lambda_theta(const RigidityParams& rp, double theta) {
  if (rp.d == 2) {
    if (rp.kappa != 0.0) throw ValidationError("lambda_theta at d = 2 is only defined for kappa = 0");
    return rp.delta * (1.0 - theta) * rp.lambda1;
  }
  const double d = rp.d;
  return (1.0 + rp.delta * theta * (d - 1.0) / (d - 2.0)) * rp.kappa + rp.delta * (1.0 - theta) * rp.lambda1;
}

double theta_star(const RigidityParams& rp) {
  const double d = rp.d;
  const double n = rp.n;
  const double num = (d - 2.0) * (n - 1.0) * (3.0 * n + 1.0 - d * (3.0 * n + 5.0));
  const double den = (d + 1.0) * (d * (n * n - n - 4.0) - n * n + 3.0 * n + 2.0);
  if (den == 0.0) throw ValidationError("theta_star: degenerate parameters (vanishing denominator)");
  return num / den;
}

double lambda_star(const RigidityParams& rp) { return lambda_theta(rp, theta_star(rp)); }

MuStarBounds mu_star_bounds(const RigidityParams& rp, const InequalityParams& params) {
  const double q = params.q;
  const double m1 = mu_one(q);
  const double inv_beta = 1.0 / params.beta;
  const double ls = lambda_star(rp);
  MuStarBounds b;
  b.lower = ls > 0.0 ? m1 * std::pow(ls / (2.0 * (q - 1.0)), inv_beta) : 0.0;
  b.upper = m1 * std::pow(rp.lambda1 / (2.0 * q - 1.0), inv_beta);
  return b;
}

Rational theta_star_exact(int d, Rational n) {
  const Rational D(d);
  const Rational num = (D - 2) * (n - 1) * (Rational(3) * n + 1 - D * (Rational(3) * n + 5));
  const Rational den = (D + 1) * (D * (n * n - n - 4) - n * n + Rational(3) * n + 2);
  if (den == Rational(0)) throw ValidationError("theta_star: degenerate parameters (vanishing denominator)");
  return num / den;
}

Rational lambda_theta_exact(int d, Rational n, Rational kappa, Rational lambda1, Rational theta) {
  const Rational D(d);
  const Rational delta = (n - D) / ((D - 1) * (n - 1));
  if (d == 2) {
    if (!(kappa == Rational(0))) throw ValidationError("lambda_theta at d = 2 is only defined for kappa = 0");
    return delta * (Rational(1) - theta) * lambda1;
  }
  return (Rational(1) + delta * theta * (D - 1) / (D - 2)) * kappa + delta * (Rational(1) - theta) * lambda1;
}

SphereIdentity sphere_identity_exact(int d, int q) {
  const Rational n(2 * q);
  const Rational kappa(d - 2);
  const Rational lambda1(d - 1);
  const Rational ls = lambda_theta_exact(d, n, kappa, lambda1, theta_star_exact(d, n));
  return {ls / Rational(2 * (q - 1)), lambda1 / Rational(2 * q - 1)};
}

}  // namespace klt
