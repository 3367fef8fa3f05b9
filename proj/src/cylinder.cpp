#include "klt/cylinder.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "klt/errors.hpp"
#include "klt/simd/kernels.hpp"

namespace klt {

CylinderPotential CylinderPotential::symmetric(const SampledPotential1D& v) {
  CylinderPotential c;
  c.kind = Kind::symmetric;
  c.grid = v.grid;
  c.m = 1;
  c.values = v.values;
  return c;
}

CylinderPotential CylinderPotential::general2d(const Grid1D& grid, int m, std::vector<double> values) {
  if (m < 3) throw ValidationError("general2d potential needs at least 3 angular points");
  if (values.size() != static_cast<std::size_t>(grid.n) * m)
    throw ValidationError("general2d potential size does not match n x m");
  CylinderPotential c;
  c.kind = Kind::general2d;
  c.grid = grid;
  c.m = m;
  c.values = std::move(values);
  return c;
}

SampledPotential1D CylinderPotential::line() const {
  if (kind != Kind::symmetric) throw ValidationError("line() requires a symmetric potential");
  return {grid, values, std::nullopt};
}

double CylinderPotential::lq_norm(double q) const {
  double s = 0.0;
  for (double x : values)
    if (x != 0.0) s += std::pow(std::fabs(x), q);
  return std::pow(grid.h() * s / m, 1.0 / q);
}

ModeResult ground_state_symmetric(const CylinderPotential& v, const ManifoldSpec& manifold, int l_max) {
  if (v.kind != CylinderPotential::Kind::symmetric)
    throw ValidationError("mode decomposition requires a potential depending on s only");
  ModeResult result;
  result.base = ground_state_1d(v.line());
  const double e0 = result.base.eigenvalue;
  const auto& spectrum = manifold.spectrum();
  const int available = static_cast<int>(spectrum.size()) - 1;
  if (l_max > available)
    throw ValidationError("requested l_max exceeds the spectrum available for " + manifold.name());
  if (l_max < 0) {
    const double sup_v = *std::max_element(v.values.begin(), v.values.end());
    l_max = available;
    for (int l = 0; l <= available; ++l)
      if (spectrum[l].lambda > sup_v + std::fabs(e0)) {
        l_max = l;
        break;
      }
  }
  result.eigenvalue = e0 + spectrum[0].lambda;
  for (int l = 0; l <= l_max; ++l) {
    const double e = e0 + spectrum[l].lambda;
    result.modes.push_back({l, spectrum[l].lambda, spectrum[l].multiplicity, e});
    if (e < result.eigenvalue) {
      result.eigenvalue = e;
      result.minimizing_mode = l;
    }
  }
  return result;
}

SpectralResult ground_state_2d_oracle(const CylinderPotential& v, const OracleOptions& options) {
  if (v.kind != CylinderPotential::Kind::general2d)
    throw ValidationError("the 2D oracle takes a general2d potential");
  const int n = v.grid.n;
  const int m = v.m;
  const long unknowns = static_cast<long>(n) * m;
  if (unknowns > options.max_unknowns)
    throw ValidationError("2D oracle grid too large (" + std::to_string(unknowns) + " unknowns)");

  const double hs = v.grid.h();
  const double ht = 2.0 * std::numbers::pi / m;
  const double inv_hs2 = 1.0 / (hs * hs);
  const double inv_ht2 = 1.0 / (ht * ht);

  // H >= -D_s^2 - max_theta V, so the line bottom for max_theta V bounds
  // the spectrum from below and keeps the shifted matrix positive definite
  std::vector<double> vmax(n);
  for (int i = 0; i < n; ++i) {
    double mx = v.at(i, 0);
    for (int j = 1; j < m; ++j) mx = std::max(mx, v.at(i, j));
    vmax[i] = mx;
  }
  const double e_low = bottom_eigenvalue(vmax, hs);
  const double shift = e_low - 1e-3 * (1.0 + std::fabs(e_low));

  using Sparse = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(unknowns) * 5);
  const auto idx = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int at = idx(i, j);
      triplets.emplace_back(at, at, 2.0 * inv_hs2 + 2.0 * inv_ht2 - v.at(i, j) - shift);
      if (i > 0) triplets.emplace_back(at, idx(i - 1, j), -inv_hs2);
      if (i + 1 < n) triplets.emplace_back(at, idx(i + 1, j), -inv_hs2);
      triplets.emplace_back(at, idx(i, (j + m - 1) % m), -inv_ht2);
      triplets.emplace_back(at, idx(i, (j + 1) % m), -inv_ht2);
    }
  }
  Sparse a(unknowns, unknowns);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Sparse> llt(a);
  if (llt.info() != Eigen::Success) throw SolverError("2D oracle: shifted operator is not positive definite", 0, 0.0);

  const auto& k = simd::kernels();
  const std::size_t len = static_cast<std::size_t>(unknowns);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(unknowns);
  std::vector<double> neg_v(v.values.size());
  for (std::size_t i = 0; i < neg_v.size(); ++i) neg_v[i] = -v.values[i];
  std::vector<double> hx(len);
  const double weight = hs / m;

  SpectralResult r;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    x = llt.solve(x);
    x /= std::sqrt(weight * x.squaredNorm());
    k.stencil_cylinder(n, m, inv_hs2, inv_ht2, neg_v.data(), x.data(), hx.data());
    const double e = weight * k.dot(x.data(), hx.data(), len);
    k.axpby(-e, x.data(), 1.0, hx.data(), len);
    residual = std::sqrt(weight * k.dot(hx.data(), hx.data(), len));
    r.eigenvalue = e;
    if (residual <= options.residual_tol) break;
  }
  if (residual > options.residual_tol) throw SolverError("2D oracle did not converge", it, residual);
  if (x.sum() < 0.0) x = -x;
  r.extrapolated = r.eigenvalue;
  r.lambda1 = std::max(0.0, -r.eigenvalue);
  r.eigenfunction.assign(x.data(), x.data() + len);
  r.residual = residual;
  r.iterations = it;
  return r;
}

double instability_coefficient(double mu, const InequalityParams& params, const ManifoldSpec& manifold) {
  const double p = params.p;
  return manifold.lambda1() - 0.25 * (p * p - 4.0) * lambda_R(mu, params);
}

double instability_threshold(const InequalityParams& params, const ManifoldSpec& manifold) {
  const double p = params.p;
  return invert_lambda_R(4.0 * manifold.lambda1() / (p * p - 4.0), params);
}

double instability_operator_check(double mu, const InequalityParams& params, const ManifoldSpec& manifold,
                                  int n) {
  const OptimalPotential v = optimal_potential(mu, params);
  const double p = params.p;
  const SampledPotential1D w =
      sample_potential(optimal_family_grid(mu, params.q, n), [&](double s) { return (p - 1.0) * v(s); });
  const SpectralResult r = ground_state_1d(w);
  return manifold.lambda1() + r.extrapolated + lambda_R(mu, params);
}

EnergySplit perturbation_energy_split(double mu, double eps, const InequalityParams& params,
                                      const ManifoldSpec& manifold, int n, int m) {
  if (manifold.dim() != 1) throw ValidationError("energy split uses the explicit circle harmonic (dim M = 1)");
  if (!(std::fabs(eps) <= 0.5)) throw ValidationError("energy split requires |eps| <= 0.5");
  if (m < 3) throw ValidationError("energy split needs at least 3 angular points");
  const auto& k = simd::kernels();
  const double p = params.p;
  const Grid1D grid = optimal_family_grid(mu, params.q, n);
  const double h = grid.h();
  const OptimalEigenfunction phi_fn = optimal_eigenfunction(mu, params);

  std::vector<double> phi(n), chi(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = phi_fn(grid.node(i));
    chi[i] = std::pow(phi[i], 0.5 * p);
  }
  std::vector<double> harmonic(m);
  for (int j = 0; j < m; ++j) harmonic[j] = std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * j / m);

  const double lambda1 = manifold.lambda1();
  const auto quotient = [&](double e, double* l2_out) {
    std::vector<double> field(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) field[i * m + j] = phi[i] + e * chi[i] * harmonic[j];
    const std::size_t len = field.size();
    const double kin_s = k.dirichlet_rows(field.data(), n, m) / (h * m);
    const double kin_g = lambda1 * e * e * h * k.dot(chi.data(), chi.data(), n);
    const double lp = h / m * k.abs_power_sum(field.data(), len, p);
    const double l2 = h / m * k.dot(field.data(), field.data(), len);
    *l2_out = l2;
    return (kin_s + kin_g - mu * std::pow(lp, 2.0 / p)) / l2;
  };

  EnergySplit out{};
  double l2_0 = 0.0;
  double l2_e = 0.0;
  const double r0 = quotient(0.0, &l2_0);
  const double re = quotient(eps, &l2_e);
  out.symmetric_part = r0;
  out.correction = re - r0;
  out.l2_norm_sq = l2_0;
  out.l2_norm_sq_eps = l2_e;
  out.lp_norm_p = h * k.abs_power_sum(phi.data(), phi.size(), p);
  return out;
}

}  // namespace klt
