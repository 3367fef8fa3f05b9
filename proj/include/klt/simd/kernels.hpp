#pragma once
// Data-parallel inner loops used by the solvers.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Setting KLT_SIMD=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <string_view>

namespace klt::simd {

struct KernelTable {
  const char* name;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);

  // y[i] = a * x[i] + b * y[i]
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);

  // sum over rows i = 0..n and columns k of (x[i][k] - x[i-1][k])^2 with
  // x[-1] = x[n] = 0; rows are `width` contiguous doubles.
  double (*dirichlet_rows)(const double* x, std::size_t n, std::size_t width);

  // Batched Thomas solve of T x = rhs for `width` independent tridiagonal
  // systems that share the constant off-diagonal `off`. `cprime` and `denom`
  // are n x width tables produced by the factorization (see
  // thomas_factor_batched); rhs is overwritten with the solution.
  void (*thomas_solve_batched)(std::size_t n, std::size_t width, double off, const double* cprime,
                               const double* denom, double* rhs);

  // y = (-D_s^2 - D_theta^2 + diag) x on an n x m grid, Dirichlet in the row
  // index and periodic in the column index. m == 1 drops the angular term.
  void (*stencil_cylinder)(std::size_t n, std::size_t m, double inv_hs2, double inv_ht2,
                           const double* diag, const double* x, double* y);

  // y[i] = |x[i]|^(p-2) x[i]
  void (*signed_power)(const double* x, double* y, std::size_t n, double p);

  // sum_i |x[i]|^p
  double (*abs_power_sum)(const double* x, std::size_t n, double p);
};

const KernelTable& scalar_kernels();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();

// The table chosen for this process.
const KernelTable& kernels();

// Fills cprime/denom (n x width) from the n x width diagonal table and the
// shared off-diagonal `off`. Requires the systems to be nonsingular without
// pivoting (diagonally dominant or positive definite).
void thomas_factor_batched(std::size_t n, std::size_t width, double off, const double* diag,
                           double* cprime, double* denom);

}  // namespace klt::simd
