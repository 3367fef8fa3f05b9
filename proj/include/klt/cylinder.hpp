#pragma once
// Schrodinger ground states on the cylinder R x M.
//
// Potentials depending on s only reduce, mode by mode, to shifted line
// problems. For M = S^1 a dense 5-point discretization of the full operator
// serves as an independent oracle. The second-variation test along the first
// harmonic of M decides whether the optimal line potential stays optimal.

#include <vector>

#include "klt/line_solver.hpp"
#include "klt/manifold.hpp"
#include "klt/params.hpp"

namespace klt {

/// Potential on the cylinder. `symmetric` stores V(s_i); `general2d` stores
/// V(s_i, theta_j) row-major (s outer) for M = S^1 with theta_j = 2 pi j / m.
struct CylinderPotential {
  enum class Kind { symmetric, general2d };

  Kind kind = Kind::symmetric;
  Grid1D grid;
  int m = 1;
  std::vector<double> values;

  static CylinderPotential symmetric(const SampledPotential1D& v);
  static CylinderPotential general2d(const Grid1D& grid, int m, std::vector<double> values);

  double at(int i, int j) const { return kind == Kind::symmetric ? values[i] : values[i * m + j]; }
  SampledPotential1D line() const;  // symmetric only
  /// L^q norm for the volume-normalized measure ds x dtheta/(2 pi).
  double lq_norm(double q) const;
};

struct ModeEntry {
  int ell;
  double lambda_ell;
  long multiplicity;
  double e_ell;
};

struct ModeResult {
  std::vector<ModeEntry> modes;
  double eigenvalue = 0.0;  // min over modes
  int minimizing_mode = 0;
  SpectralResult base;      // mode-0 line solve
};

/// l_max < 0 picks the smallest l with lambda_l > sup V + |e_0|, capped by the
/// available spectrum of M.
ModeResult ground_state_symmetric(const CylinderPotential& v, const ManifoldSpec& manifold, int l_max = -1);

struct OracleOptions {
  double residual_tol = 1e-8;
  int max_iterations = 500;
  long max_unknowns = 200000;
};

/// Bottom eigenpair of the 5-point discretization of -d_s^2 - d_theta^2 - V
/// on R x S^1 (Dirichlet in s, periodic in theta), by shifted inverse
/// iteration from the all-ones vector.
SpectralResult ground_state_2d_oracle(const CylinderPotential& v, const OracleOptions& options = {});

/// c(mu) = lambda1^M - (p^2 - 4) Lambda_R(mu) / 4; negative values certify
/// that the optimal line potential is not optimal on the cylinder.
double instability_coefficient(double mu, const InequalityParams& params, const ManifoldSpec& manifold);

/// Zero of instability_coefficient: Lambda_R(mu) = 4 lambda1 / (p^2 - 4).
double instability_threshold(const InequalityParams& params, const ManifoldSpec& manifold);

/// lambda1^M + e* + Lambda_R(mu), e* the extrapolated bottom eigenvalue of
/// -D^2 - (p-1) V_{1,mu} on the adapted grid with n points.
double instability_operator_check(double mu, const InequalityParams& params, const ManifoldSpec& manifold,
                                  int n = 4001);

struct EnergySplit {
  double symmetric_part;  // R(0) = E(0) / ||phi||_2^2
  double correction;      // R(eps) - R(0)
  double lp_norm_p;       // ||phi_mu||_p^p
  double l2_norm_sq;      // ||phi_mu||_2^2
  double l2_norm_sq_eps;  // ||phi_eps||_2^2
};

/// Rayleigh quotient E(eps)/||phi_eps||_2^2 of the perturbed eigenfunction
/// phi_eps = phi_mu + eps phi_mu^(p/2) psi_1 with
/// E = ||d_s phi||^2 + ||grad_g phi||^2 - mu ||phi||_p^2, split into its
/// eps = 0 value and the change. Requires dim M = 1 (psi_1 = sqrt2 cos theta).
EnergySplit perturbation_energy_split(double mu, double eps, const InequalityParams& params,
                                      const ManifoldSpec& manifold, int n = 8001, int m = 16);

}  // namespace klt
