#include "klt/simd/kernels.hpp"

#include <cmath>

namespace klt::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double dirichlet_rows_scalar(const double* x, std::size_t n, std::size_t width) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < width; ++k) s += x[k] * x[k];
  for (std::size_t i = 1; i < n; ++i) {
    const double* cur = x + i * width;
    const double* prev = cur - width;
    for (std::size_t k = 0; k < width; ++k) {
      const double d = cur[k] - prev[k];
      s += d * d;
    }
  }
  const double* last = x + (n - 1) * width;
  for (std::size_t k = 0; k < width; ++k) s += last[k] * last[k];
  return s;
}

void thomas_solve_scalar(std::size_t n, std::size_t width, double off, const double* cprime,
                         const double* denom, double* rhs) {
  if (n == 0) return;
  for (std::size_t k = 0; k < width; ++k) rhs[k] *= denom[k];
  for (std::size_t i = 1; i < n; ++i) {
    double* cur = rhs + i * width;
    const double* prev = cur - width;
    const double* dn = denom + i * width;
    for (std::size_t k = 0; k < width; ++k) cur[k] = (cur[k] - off * prev[k]) * dn[k];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    double* cur = rhs + i * width;
    const double* next = cur + width;
    const double* cp = cprime + i * width;
    for (std::size_t k = 0; k < width; ++k) cur[k] -= cp[k] * next[k];
  }
}

void stencil_cylinder_scalar(std::size_t n, std::size_t m, double inv_hs2, double inv_ht2,
                             const double* diag, const double* x, double* y) {
  const double centre = 2.0 * inv_hs2 + (m > 1 ? 2.0 * inv_ht2 : 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * m;
    const double* up = i > 0 ? row - m : nullptr;
    const double* down = i + 1 < n ? row + m : nullptr;
    double* out = y + i * m;
    const double* dg = diag + i * m;
    for (std::size_t j = 0; j < m; ++j) {
      double v = (centre + dg[j]) * row[j];
      if (up) v -= inv_hs2 * up[j];
      if (down) v -= inv_hs2 * down[j];
      if (m > 1) {
        const std::size_t jl = j == 0 ? m - 1 : j - 1;
        const std::size_t jr = j + 1 == m ? 0 : j + 1;
        v -= inv_ht2 * (row[jl] + row[jr]);
      }
      out[j] = v;
    }
  }
}

void signed_power_scalar(const double* x, double* y, std::size_t n, double p) {
  if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * x[i] * x[i];
    return;
  }
  if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fabs(x[i]) * x[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    y[i] = a == 0.0 ? 0.0 : std::pow(a, p - 2.0) * x[i];
  }
}

double abs_power_sum_scalar(const double* x, std::size_t n, double p) {
  double s = 0.0;
  if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double sq = x[i] * x[i];
      s += sq * sq;
    }
    return s;
  }
  if (p == 2.0) return dot_scalar(x, x, n);
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",          dot_scalar,          axpby_scalar,          dirichlet_rows_scalar,
      thomas_solve_scalar, stencil_cylinder_scalar, signed_power_scalar, abs_power_sum_scalar,
  };
  return table;
}

void thomas_factor_batched(std::size_t n, std::size_t width, double off, const double* diag,
                           double* cprime, double* denom) {
  if (n == 0) return;
  for (std::size_t k = 0; k < width; ++k) {
    denom[k] = 1.0 / diag[k];
    cprime[k] = off * denom[k];
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t at = i * width + k;
      denom[at] = 1.0 / (diag[at] - off * cprime[at - width]);
      cprime[at] = off * denom[at];
    }
  }
}

}  // namespace klt::simd
