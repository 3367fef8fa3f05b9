#pragma once
// Ground states of -d^2/ds^2 - V on a truncated line with Dirichlet ends.
//
// The operator is discretized with second-order central differences on the
// interior nodes s_i = s_min + (i+1) h, i = 0..n-1. The bottom eigenvalue is
// isolated by Sturm-sequence bisection on the tridiagonal matrix and the
// eigenvector is recovered by shifted inverse iteration.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "klt/params.hpp"

namespace klt {

struct Grid1D {
  double s_min = -20.0;
  double s_max = 20.0;
  int n = 4001;

  double h() const { return (s_max - s_min) / (n + 1); }
  double node(int i) const { return s_min + (i + 1) * h(); }
};

/// Validates s_min < s_max and n >= 16.
Grid1D make_grid(double s_min, double s_max, int n);
inline Grid1D symmetric_grid(double half_width, int n) { return make_grid(-half_width, half_width, n); }

/// Truncation [-20/nu, 20/nu] adapted to the optimal family at norm mu.
Grid1D optimal_family_grid(double mu, double q, int n);

struct SampledPotential1D {
  Grid1D grid;
  std::vector<double> values;
  std::optional<std::pair<double, double>> q_norm_cache;  // (q, ||V||_q)
};

SampledPotential1D sample_potential(const Grid1D& grid, const std::function<double(double)>& v);

struct SpectralResult {
  double eigenvalue = 0.0;    // bottom of the discrete spectrum, signed
  double extrapolated = 0.0;  // Richardson value from the h and 2h grids
  double lambda1 = 0.0;       // max(0, -eigenvalue)
  std::vector<double> eigenfunction;  // unit L^2 norm, positive
  double residual = 0.0;      // ||(H - e) u||_2
  double error_estimate = 0.0;
  int iterations = 0;

  double lambda1_extrapolated() const { return extrapolated < 0.0 ? -extrapolated : 0.0; }
};

struct LineSolveOptions {
  bool richardson = true;
  double residual_tol = 1e-8;
  int max_iterations = 60;
};

/// Bottom eigenpair of -D^2 - V. Throws SolverError if inverse iteration
/// does not reach the residual tolerance.
SpectralResult ground_state_1d(const SampledPotential1D& v, const LineSolveOptions& options = {});

/// Bottom eigenvalue only (bisection, no eigenvector), for raw diagonals.
double bottom_eigenvalue(const std::vector<double>& potential, double h);

/// Combines eigenvalues at spacings h1 > h2 assuming an h^2 leading error.
double richardson(double e1, double h1, double e2, double h2);

/// (h sum |V_i|^q)^(1/q); with positive_part only V_+ contributes.
double lq_norm_1d(const SampledPotential1D& v, double q, bool positive_part = false);

/// V_nu(s) = nu^2 V(nu s) on the grid [s_min/nu, s_max/nu].
SampledPotential1D scale_potential(const SampledPotential1D& v, double nu);

/// Lambda_R(||V_+||_q) - lambda_1[V_+] with the extrapolated eigenvalue; 0
/// when V_+ vanishes.
double keller_gap(const SampledPotential1D& v, const InequalityParams& params);
double keller_gap(const SampledPotential1D& v, double q);

/// Optimal constant L^1_{gamma,d} with q = p/(p-2), gamma = q - d/2,
/// computed from the radial ground state of -w'' - (d-1)/r w' + w = w^(p-1).
double radial_gns_constant(int d, double p);

struct RadialProfile {
  double w0;                 // w(0)
  std::vector<double> r;     // sample radii
  std::vector<double> w;     // profile
  double lp_norm_p;          // integral over R^d of w^p
};

/// The shooting solution itself; exposed for profile checks.
RadialProfile radial_ground_state(int d, double p);

}  // namespace klt
