#pragma once
// The dual Gagliardo-Nirenberg problem on the cylinder
//
//   mu(lambda) = inf Q_lambda[u],
//   Q_lambda[u] = (||d_s u||^2 + ||grad_g u||^2 + lambda ||u||_2^2) / ||u||_p^2,
//
// its inversion mu -> Lambda(mu), the potential functional J[V] and the
// numerical detection of the symmetry threshold.

#include <string>
#include <utility>
#include <vector>

#include "klt/cylinder.hpp"
#include "klt/discretization.hpp"
#include "klt/errors.hpp"
#include "klt/manifold.hpp"
#include "klt/params.hpp"

namespace klt {

struct GnsConfig {
  // grid design, relative to the design value lambda_g of the penalization
  int n_s = 801;               // s nodes
  double window = 20.0;        // half-width of the s window times sqrt(lambda_g)
  int m_min = 16;              // angular points (general2d), power of two
  double m_per_root = 24.0;    // angular points per sqrt(lambda_g / lambda1)
  int quad_nodes = 24;         // quadrature nodes (two_mode)

  // optimizer
  double step = 1.0;           // first trial step of the line search
  double armijo = 1e-4;
  double tol = 1e-7;           // preconditioned gradient norm, relative
  int max_iter = 20000;
  int starts = 3;              // cold starts for general modes
  double kick = 0.1;           // first-harmonic amplitude of the kicked start
  unsigned seed = 12345;

  // outer solves
  double lambda_tol = 1e-9;    // |mu(lambda) - mu| / mu at the root
  int lambda_max_iter = 80;
  double threshold_tol = 1e-2; // relative width of the threshold bracket
  double threshold_lo = 0.5;   // initial bracket, times the reference threshold
  double threshold_hi = 1.5;
  double detect = 1e-6;        // symmetry_fraction above which a state is broken
};

/// name=value lines, '#' comments; unknown names are rejected.
GnsConfig parse_gns_config(const std::string& text);
GnsConfig load_gns_config(const std::string& path);

struct GnsState {
  CylinderGrid grid;
  std::vector<double> u;       // coefficients, ||u||_p = 1, nonnegative mean
  double lambda = 0.0;
  double quotient = 0.0;       // Q_lambda[u]
  double gradient_norm = 0.0;  // ||u - Q P(|u|^(p-2) u)||_a / ||u||_a
  int iterations = 0;
  bool symmetric_fallback = false;  // general mode that never left the symmetric branch
};

/// Non-convergence of the optimizer; carries the best state reached.
class GnsNonConvergence : public SolverError {
 public:
  GnsNonConvergence(const std::string& what, GnsState best)
      : SolverError(what, best.iterations, best.gradient_norm), best_(std::move(best)) {}
  const GnsState& best() const { return best_; }

 private:
  GnsState best_;
};

/// Grid adapted to penalization lambda_g.
CylinderGrid design_grid(GnsMode mode, double lambda_g, const InequalityParams& params, const ManifoldSpec& manifold,
                         const GnsConfig& config);

/// Default mode for a manifold: general2d for dim M = 1, two_mode for
/// spheres, symmetric otherwise.
GnsMode default_mode(const ManifoldSpec& manifold);

/// One preconditioned gradient run from u0. Does not throw on
/// non-convergence; check gradient_norm against config.tol.
GnsState minimize_quotient(const Discretization& disc, double lambda, std::vector<double> u0, const GnsConfig& config);

/// Cold starts for the given space: the line profile at lambda, the same
/// profile kicked along the first harmonic and, in general2d, a localized
/// bump; further seeded perturbations up to config.starts.
std::vector<std::vector<double>> initial_states(const Discretization& disc, double lambda, const GnsConfig& config);

struct GnsResult {
  double mu = 0.0;  // mu(lambda)
  GnsState state;
};

/// Best of the multi-start runs (or of `warm` and its kicked copy when given).
GnsResult gns_constant(const Discretization& disc, double lambda, const InequalityParams& params,
                       const GnsConfig& config, const std::vector<double>* warm = nullptr);
GnsResult gns_constant(double lambda, const InequalityParams& params, const ManifoldSpec& manifold, GnsMode mode,
                       const GnsConfig& config = {});

/// Energy fraction carried by the nonconstant modes of M.
double symmetry_fraction(const GnsState& state);

struct LambdaResult {
  double value = 0.0;                // Lambda(mu)
  double lambda_R = 0.0;             // Lambda_R(mu)
  double tolerance = 0.0;            // root tolerance + discretization estimate
  double discretization_error = 0.0; // |discrete symmetric Lambda - Lambda_R|
  GnsState state;
  std::vector<std::pair<double, double>> samples;  // (lambda, mu(lambda))
  int regrids = 0;
};

/// (|M| L^1_{gamma,d} mu^q)^(1/gamma), gamma = q - d/2, with |M| the
/// natural volume; 0 when the volume is unknown.
double semiclassical_lambda(double mu, const InequalityParams& params, const ManifoldSpec& manifold);

/// Solves mu(lambda) = mu by safeguarded Newton steps (d mu / d lambda =
/// ||u||_2^2 at the optimum) inside a bisection bracket. Throws
/// InconclusiveError with the samples when no bracket is found.
LambdaResult capital_lambda(double mu, const InequalityParams& params, const ManifoldSpec& manifold, GnsMode mode,
                            const GnsConfig& config = {});

/// V = mu |u|^(p-2) / ||u||_p^(p-2) on the physical grid.
CylinderPotential potential_from_state(const GnsState& state, double mu, const InequalityParams& params);

/// J[V] = (||V||_q^q - ||d_s w||^2 - ||grad_g w||^2) / ||w||^2, w = V^((q-1)/2).
double evaluate_J(const CylinderPotential& v, const InequalityParams& params, const ManifoldSpec& manifold);

struct ThresholdSample {
  double lambda;
  double mu;
  double fraction;
};

struct ThresholdResult {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  MuStarBounds bounds{};       // interval from the curvature estimate
  double reference = 0.0;      // zero of the instability coefficient
  std::string method;          // general2d | two_mode | instability
  std::vector<ThresholdSample> samples;
};

ThresholdResult threshold_search(const InequalityParams& params, const ManifoldSpec& manifold,
                                 const GnsConfig& config = {});

}  // namespace klt
