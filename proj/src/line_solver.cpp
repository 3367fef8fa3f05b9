#include "klt/line_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "klt/errors.hpp"
#include "klt/simd/kernels.hpp"

namespace klt {
namespace {

// Number of eigenvalues of the tridiagonal matrix (diag, off) below x.
int sturm_count(const std::vector<double>& diag, double off, double x) {
  const double off2 = off * off;
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    d = diag[i] - x - (i > 0 ? off2 / d : 0.0);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

double bisect_bottom(const std::vector<double>& diag, double off) {
  // The matrix is diag - |off| (shift + Laplacian) with the Laplacian part
  // positive definite, so min(diag) - 2|off| is a lower bound, min(diag) an
  // upper one.
  double hi = *std::min_element(diag.begin(), diag.end());
  double lo = hi - 2.0 * std::fabs(off) - 1.0;
  for (double v : diag) lo = std::min(lo, v - 2.0 * std::fabs(off) - 1.0);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(diag, off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> operator_diagonal(const std::vector<double>& potential, double h) {
  std::vector<double> diag(potential.size());
  const double c = 2.0 / (h * h);
  for (std::size_t i = 0; i < potential.size(); ++i) diag[i] = c - potential[i];
  return diag;
}

struct Eigenpair1D {
  double value;
  std::vector<double> vector;
  double residual;
  int iterations;
};

Eigenpair1D solve_bottom(const std::vector<double>& potential, double h, const LineSolveOptions& options) {
  const auto& k = simd::kernels();
  const std::size_t n = potential.size();
  const double off = -1.0 / (h * h);
  const std::vector<double> diag = operator_diagonal(potential, h);
  const double e = bisect_bottom(diag, off);

  const double shift = e - 1e-9 * (1.0 + std::fabs(e));
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = diag[i] - shift;
  std::vector<double> cprime(n), denom(n);
  simd::thomas_factor_batched(n, 1, off, shifted.data(), cprime.data(), denom.data());

  std::vector<double> u(n, 1.0);
  std::vector<double> hu(n);
  std::vector<double> neg_v(n);
  for (std::size_t i = 0; i < n; ++i) neg_v[i] = -potential[i];
  const double inv_h2 = 1.0 / (h * h);

  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    k.thomas_solve_batched(n, 1, off, cprime.data(), denom.data(), u.data());
    const double norm = std::sqrt(h * k.dot(u.data(), u.data(), n));
    const double sign = std::accumulate(u.begin(), u.end(), 0.0) < 0.0 ? -1.0 : 1.0;
    k.axpby(0.0, u.data(), sign / norm, u.data(), n);
    k.stencil_cylinder(n, 1, inv_h2, 0.0, neg_v.data(), u.data(), hu.data());
    k.axpby(-e, u.data(), 1.0, hu.data(), n);
    residual = std::sqrt(h * k.dot(hu.data(), hu.data(), n));
    if (residual <= options.residual_tol) break;
  }
  if (residual > options.residual_tol)
    throw SolverError("inverse iteration did not reach the residual tolerance", it, residual);
  return {e, std::move(u), residual, it};
}

}  // namespace

Grid1D make_grid(double s_min, double s_max, int n) {
  if (!(s_min < s_max)) throw ValidationError("grid requires s_min < s_max");
  if (n < 16) throw ValidationError("grid requires at least 16 interior points");
  return {s_min, s_max, n};
}

Grid1D optimal_family_grid(double mu, double q, int n) {
  const double nu = optimal_scale(mu, q);
  return symmetric_grid(20.0 / nu, n);
}

SampledPotential1D sample_potential(const Grid1D& grid, const std::function<double(double)>& v) {
  SampledPotential1D out{grid, std::vector<double>(grid.n), std::nullopt};
  for (int i = 0; i < grid.n; ++i) out.values[i] = v(grid.node(i));
  return out;
}

double bottom_eigenvalue(const std::vector<double>& potential, double h) {
  return bisect_bottom(operator_diagonal(potential, h), -1.0 / (h * h));
}

double richardson(double e1, double h1, double e2, double h2) {
  const double a = h1 * h1;
  const double b = h2 * h2;
  return (e2 * a - e1 * b) / (a - b);
}

SpectralResult ground_state_1d(const SampledPotential1D& v, const LineSolveOptions& options) {
  const Grid1D& g = v.grid;
  if (static_cast<int>(v.values.size()) != g.n) throw ValidationError("potential length does not match grid");
  for (double x : v.values)
    if (!std::isfinite(x)) throw ValidationError("potential samples must be finite");

  const double h = g.h();
  Eigenpair1D fine = solve_bottom(v.values, h, options);

  SpectralResult r;
  r.eigenvalue = fine.value;
  r.lambda1 = std::max(0.0, -fine.value);
  r.eigenfunction = std::move(fine.vector);
  r.residual = fine.residual;
  r.iterations = fine.iterations;
  r.extrapolated = fine.value;

  // nodes with odd index form the grid of spacing 2h
  const int n_coarse = (g.n - 1) / 2;
  if (options.richardson && n_coarse >= 8) {
    std::vector<double> coarse(n_coarse);
    for (int j = 0; j < n_coarse; ++j) coarse[j] = v.values[2 * j + 1];
    const double e_coarse = bottom_eigenvalue(coarse, 2.0 * h);
    r.extrapolated = richardson(e_coarse, 2.0 * h, fine.value, h);
    r.error_estimate = std::fabs(r.extrapolated - fine.value);
  }
  return r;
}

double lq_norm_1d(const SampledPotential1D& v, double q, bool positive_part) {
  if (!(q >= 1.0)) throw ValidationError("L^q norm requires q >= 1");
  if (v.q_norm_cache && v.q_norm_cache->first == q && !positive_part) return v.q_norm_cache->second;
  double s = 0.0;
  for (double x : v.values) {
    const double a = positive_part ? std::max(0.0, x) : std::fabs(x);
    if (a > 0.0) s += std::pow(a, q);
  }
  return std::pow(v.grid.h() * s, 1.0 / q);
}

SampledPotential1D scale_potential(const SampledPotential1D& v, double nu) {
  if (!(nu > 0.0)) throw ValidationError("scaling requires nu > 0");
  SampledPotential1D out;
  out.grid = make_grid(v.grid.s_min / nu, v.grid.s_max / nu, v.grid.n);
  out.values.resize(v.values.size());
  for (std::size_t i = 0; i < v.values.size(); ++i) out.values[i] = nu * nu * v.values[i];
  return out;
}

double keller_gap(const SampledPotential1D& v, double q) {
  SampledPotential1D plus = v;
  plus.q_norm_cache.reset();
  for (double& x : plus.values) x = std::max(0.0, x);
  const double mu = lq_norm_1d(plus, q);
  if (mu == 0.0) return 0.0;
  const SpectralResult r = ground_state_1d(plus);
  return lambda_R(mu, q) - r.lambda1_extrapolated();
}

double keller_gap(const SampledPotential1D& v, const InequalityParams& params) { return keller_gap(v, params.q); }

}  // namespace klt
