#pragma once
// The pressure transform p_V(r) = r V(s)^(-1/2), r = e^(-alpha s), and the
// functional K[p] whose vanishing at critical points of J forces symmetry
// below the threshold. All integrals are evaluated in the s variable, where
// d/dr = -(1/(alpha r)) d/ds and the measure r^(2q-1) dr becomes
// alpha r^(2q) ds.

#include <vector>

#include "klt/cylinder.hpp"
#include "klt/manifold.hpp"
#include "klt/params.hpp"

namespace klt {

struct PressureData {
  double alpha = 0.0;           // sqrt(Lambda_R(mu)) / (q-1)
  Grid1D grid;
  int m = 1;
  std::vector<double> p_vals;   // p_V on the grid, row-major like the potential
  int row_lo = 0;               // evaluation window [row_lo, row_hi)
  int row_hi = 0;
};

/// Window: rows where V >= 1e-10 max V. Throws ValidationError when V is
/// negative somewhere or the window is not a single block of rows.
PressureData pressure_from_potential(const CylinderPotential& v, double mu, const InequalityParams& params);

struct KTerms {
  double second_order;  // weighted square of p'' - p'/r - Delta_g p / (alpha^2 (2q-1) r^2)
  double mixed;         // 2 alpha^2 term with grad_g p' - grad_g p / r
  double angular;       // integral of |grad_g p|^2 / r^4 (before its coefficient)
  double coefficient;   // lambda_star - 2 Lambda_R(mu) / (q-1)
  double total;
};

KTerms evaluate_K_terms(const CylinderPotential& v, double mu, const InequalityParams& params,
                        const RigidityParams& rp, const ManifoldSpec& manifold);

double evaluate_K(const CylinderPotential& v, double mu, const InequalityParams& params, const RigidityParams& rp,
                  const ManifoldSpec& manifold);

}  // namespace klt
