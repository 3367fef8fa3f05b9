#pragma once
// Closed-form constants of the Keller-Lieb-Thirring problem on the line and
// on cylinders R x M: exponents, the line optimum Lambda_R(mu) and its
// optimal potential family, the curvature-dimension constants lambda_theta,
// theta_star, lambda_star, and the bounds on the symmetry threshold mu_star.

#include "klt/rational.hpp"

namespace klt {

/// Exponent bundle for a cylinder of dimension d.
///
/// q is the Lebesgue exponent of the potential, p = 2q/(q-1) the dual
/// exponent of the eigenfunction, beta = 2q/(2q-1) the growth exponent of
/// Lambda_R and gamma = q - d/2.
struct InequalityParams {
  int d = 2;
  double q = 2.0;
  double p = 4.0;
  double beta = 4.0 / 3.0;
  double gamma = 1.0;
};

/// Rejects d < 2 and q <= d/2.
InequalityParams make_params(int d, double q);

double exponent_p(double q);
double exponent_beta(double q);

/// mu_1 = q (q-1) (sqrt(pi) Gamma(q) / Gamma(q+1/2))^(1/q), the L^q norm of
/// V_1(s) = q(q-1)/cosh^2(s). Requires q > 1.
double mu_one(double q);
inline double mu_one(const InequalityParams& params) { return mu_one(params.q); }

/// Lambda_R(mu) = (q-1)^2 (mu/mu_1)^beta. Requires mu > 0.
double lambda_R(double mu, double q);
inline double lambda_R(double mu, const InequalityParams& params) { return lambda_R(mu, params.q); }

/// Inverse of lambda_R: mu_1 (lambda/(q-1)^2)^(1/beta). Requires lambda > 0.
double invert_lambda_R(double lambda, double q);
inline double invert_lambda_R(double lambda, const InequalityParams& params) {
  return invert_lambda_R(lambda, params.q);
}

/// Scale nu = (mu/mu_1)^(q/(2q-1)) of the optimal family at norm mu.
double optimal_scale(double mu, double q);

/// V_{1,mu}(s) = nu^2 q (q-1) / cosh^2(nu s).
struct OptimalPotential {
  double q;
  double nu;
  double operator()(double s) const;
};

/// phi_mu(s) = cosh(nu s)^(1-q); unnormalized, phi_mu(0) = 1.
struct OptimalEigenfunction {
  double q;
  double nu;
  double operator()(double s) const;
  /// Exponential decay rate nu (q-1) = sqrt(Lambda_R(mu)).
  double decay_rate() const { return nu * (q - 1.0); }
};

OptimalPotential optimal_potential(double mu, double q);
inline OptimalPotential optimal_potential(double mu, const InequalityParams& params) {
  return optimal_potential(mu, params.q);
}
OptimalEigenfunction optimal_eigenfunction(double mu, double q);
inline OptimalEigenfunction optimal_eigenfunction(double mu, const InequalityParams& params) {
  return optimal_eigenfunction(mu, params.q);
}

/// Data entering lambda_theta: the effective dimension n, delta =
/// (n-d)/((d-1)(n-1)), and the two spectral constants of the compact factor.
struct RigidityParams {
  int d = 2;
  double n = 4.0;
  double delta = 2.0 / 3.0;
  double kappa = 0.0;
  double lambda1 = 1.0;
};

RigidityParams make_rigidity(int d, double n, double kappa, double lambda1);

/// Uses the n = 2q convention.
RigidityParams make_rigidity(const InequalityParams& params, double kappa, double lambda1);

/// lambda_theta = (1 + delta theta (d-1)/(d-2)) kappa + delta (1-theta) lambda1.
/// For d = 2 only kappa = 0 is accepted and the kappa term is dropped.
double lambda_theta(const RigidityParams& rp, double theta);

/// theta_star = (d-2)(n-1)(3n+1-d(3n+5)) / ((d+1)(d(n^2-n-4)-n^2+3n+2)).
/// Throws ValidationError when the denominator vanishes.
double theta_star(const RigidityParams& rp);

double lambda_star(const RigidityParams& rp);

struct MuStarBounds {
  double lower;
  double upper;
};

/// (mu_1 (lambda_star/(2(q-1)))^(1/beta), mu_1 (lambda1/(2q-1))^(1/beta)).
/// A non-positive lambda_star gives lower = 0.
MuStarBounds mu_star_bounds(const RigidityParams& rp, const InequalityParams& params);

// Exact rational counterparts.
Rational theta_star_exact(int d, Rational n);
Rational lambda_theta_exact(int d, Rational n, Rational kappa, Rational lambda1, Rational theta);

/// Both sides of lambda_star/(2(q-1)) = lambda1/(2q-1) for M = S^{d-1}
/// (kappa = d-2, lambda1 = d-1) with n = 2q, in exact arithmetic.
struct SphereIdentity {
  Rational lhs;
  Rational rhs;
};
SphereIdentity sphere_identity_exact(int d, int q);

}  // namespace klt
