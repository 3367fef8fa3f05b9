#include "klt/rigidity.hpp"

#include <algorithm>
#include <cmath>

#include "klt/discretization.hpp"
#include "klt/errors.hpp"

namespace klt {

PressureData pressure_from_potential(const CylinderPotential& v, double mu, const InequalityParams& params) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  const int n = v.grid.n;
  const int m = v.m;
  double vmax = 0.0;
  for (double x : v.values) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("pressure requires a finite nonnegative potential");
    vmax = std::max(vmax, x);
  }
  if (!(vmax > 0.0)) throw ValidationError("pressure is undefined for the zero potential");
  const double floor = 1e-10 * vmax;

  PressureData pd;
  pd.alpha = std::sqrt(lambda_R(mu, params)) / (params.q - 1.0);
  pd.grid = v.grid;
  pd.m = m;
  pd.row_lo = -1;
  pd.row_hi = -1;
  for (int i = 0; i < n; ++i) {
    bool inside = true;
    for (int j = 0; j < m; ++j) inside = inside && v.at(i, j) >= floor;
    if (inside) {
      if (pd.row_lo < 0) pd.row_lo = i;
      else if (pd.row_hi >= 0) throw ValidationError("potential vanishes inside the evaluation window");
    } else if (pd.row_lo >= 0 && pd.row_hi < 0) {
      pd.row_hi = i;
    }
  }
  if (pd.row_lo < 0) throw ValidationError("empty evaluation window");
  if (pd.row_hi < 0) pd.row_hi = n;
  if (pd.row_hi - pd.row_lo < 5) throw ValidationError("evaluation window too narrow");

  pd.p_vals.resize(v.values.size());
  for (int i = 0; i < n; ++i) {
    const double r = std::exp(-pd.alpha * v.grid.node(i));
    for (int j = 0; j < m; ++j)
      pd.p_vals[static_cast<std::size_t>(i) * m + j] = r / std::sqrt(std::max(v.at(i, j), floor));
  }
  return pd;
}

KTerms evaluate_K_terms(const CylinderPotential& v, double mu, const InequalityParams& params,
                        const RigidityParams& rp, const ManifoldSpec& manifold) {
  const PressureData pd = pressure_from_potential(v, mu, params);
  const bool angular = v.kind == CylinderPotential::Kind::general2d;
  if (angular && manifold.dim() != 1) throw ValidationError("general2d potentials live on R x S^1");
  const int m = pd.m;
  const double h = pd.grid.h();
  const double q = params.q;
  const double alpha = pd.alpha;
  const double lambda1 = manifold.lambda1();
  const auto at = [&](const std::vector<double>& f, int i, int j) { return f[static_cast<std::size_t>(i) * m + j]; };

  // s derivatives on rows with both neighbours inside the window
  const std::size_t len = pd.p_vals.size();
  std::vector<double> ps(len, 0.0), pss(len, 0.0), shifted(len, 0.0);
  for (int i = pd.row_lo + 1; i + 1 < pd.row_hi; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = at(pd.p_vals, i - 1, j);
      const double b = at(pd.p_vals, i, j);
      const double c = at(pd.p_vals, i + 1, j);
      const std::size_t k = static_cast<std::size_t>(i) * m + j;
      ps[k] = (c - a) / (2.0 * h);
      pss[k] = (c - 2.0 * b + a) / (h * h);
      shifted[k] = ps[k] + alpha * b;
    }

  std::vector<double> p_t(len, 0.0), p_tt(len, 0.0), shifted_t(len, 0.0);
  if (angular) {
    CylinderGrid g;
    g.mode = GnsMode::general2d;
    g.s = pd.grid;
    g.m = m;
    g.d = params.d;
    g.p = params.p;
    g.lambda1 = lambda1;
    const Discretization disc(g);
    disc.angular_derivative(pd.p_vals.data(), 1, p_t.data());
    disc.angular_derivative(pd.p_vals.data(), 2, p_tt.data());
    disc.angular_derivative(shifted.data(), 1, shifted_t.data());
  }

  KTerms t{};
  double first = 0.0;
  double mixed = 0.0;
  double ang = 0.0;
  for (int i = pd.row_lo + 1; i + 1 < pd.row_hi; ++i) {
    const double r = std::exp(-alpha * pd.grid.node(i));
    for (int j = 0; j < m; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * m + j;
      const double p = pd.p_vals[k];
      const double w = alpha * std::pow(r, 2.0 * q - 4.0) * std::pow(p, 1.0 - 2.0 * q);
      const double lap = lambda1 * p_tt[k];
      const double e = pss[k] + 2.0 * alpha * ps[k] - lap / (2.0 * q - 1.0);
      first += e * e * w;
      mixed += lambda1 * shifted_t[k] * shifted_t[k] * w;
      ang += lambda1 * p_t[k] * p_t[k] * w;
    }
  }
  const double dvol = h / m;
  t.second_order = (2.0 * q - 1.0) / (2.0 * q) * first * dvol;
  t.mixed = 2.0 * mixed * dvol;
  t.angular = ang * dvol;
  t.coefficient = lambda_star(rp) - 2.0 * lambda_R(mu, params) / (q - 1.0);
  t.total = t.second_order + t.mixed + t.coefficient * t.angular;
  return t;
}

double evaluate_K(const CylinderPotential& v, double mu, const InequalityParams& params, const RigidityParams& rp,
                  const ManifoldSpec& manifold) {
  return evaluate_K_terms(v, mu, params, rp, manifold).total;
}

}  // namespace klt
