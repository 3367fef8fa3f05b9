// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).

#include "klt/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace klt::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), yv));
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double sumsq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double dirichlet_rows_avx2(const double* x, std::size_t n, std::size_t width) {
  if (n == 0) return 0.0;
  double s = sumsq_avx2(x, width) + sumsq_avx2(x + (n - 1) * width, width);
  // rows are contiguous, so the interior differences form one flat stream
  const double* cur = x + width;
  const double* prev = x;
  const std::size_t total = (n - 1) * width;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= total; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(cur + i), _mm256_loadu_pd(prev + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  s += hsum(acc);
  for (; i < total; ++i) {
    const double d = cur[i] - prev[i];
    s += d * d;
  }
  return s;
}

void thomas_solve_avx2(std::size_t n, std::size_t width, double off, const double* cprime,
                       const double* denom, double* rhs) {
  if (n == 0) return;
  if (width < 4) {
    scalar_kernels().thomas_solve_batched(n, width, off, cprime, denom, rhs);
    return;
  }
  const __m256d voff = _mm256_set1_pd(off);
  std::size_t k = 0;
  for (; k + 4 <= width; k += 4)
    _mm256_storeu_pd(rhs + k, _mm256_mul_pd(_mm256_loadu_pd(rhs + k), _mm256_loadu_pd(denom + k)));
  for (; k < width; ++k) rhs[k] *= denom[k];

  for (std::size_t i = 1; i < n; ++i) {
    double* cur = rhs + i * width;
    const double* prev = cur - width;
    const double* dn = denom + i * width;
    k = 0;
    for (; k + 4 <= width; k += 4) {
      const __m256d t = _mm256_fnmadd_pd(voff, _mm256_loadu_pd(prev + k), _mm256_loadu_pd(cur + k));
      _mm256_storeu_pd(cur + k, _mm256_mul_pd(t, _mm256_loadu_pd(dn + k)));
    }
    for (; k < width; ++k) cur[k] = (cur[k] - off * prev[k]) * dn[k];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    double* cur = rhs + i * width;
    const double* next = cur + width;
    const double* cp = cprime + i * width;
    k = 0;
    for (; k + 4 <= width; k += 4) {
      const __m256d t = _mm256_fnmadd_pd(_mm256_loadu_pd(cp + k), _mm256_loadu_pd(next + k),
                                         _mm256_loadu_pd(cur + k));
      _mm256_storeu_pd(cur + k, t);
    }
    for (; k < width; ++k) cur[k] -= cp[k] * next[k];
  }
}

void stencil_cylinder_avx2(std::size_t n, std::size_t m, double inv_hs2, double inv_ht2,
                           const double* diag, const double* x, double* y) {
  if (m < 6) {
    scalar_kernels().stencil_cylinder(n, m, inv_hs2, inv_ht2, diag, x, y);
    return;
  }
  const double centre = 2.0 * inv_hs2 + 2.0 * inv_ht2;
  const __m256d vc = _mm256_set1_pd(centre);
  const __m256d vs = _mm256_set1_pd(inv_hs2);
  const __m256d vt = _mm256_set1_pd(inv_ht2);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x + i * m;
    const double* up = i > 0 ? row - m : nullptr;
    const double* down = i + 1 < n ? row + m : nullptr;
    double* out = y + i * m;
    const double* dg = diag + i * m;
    auto edge = [&](std::size_t j) {
      double v = (centre + dg[j]) * row[j];
      if (up) v -= inv_hs2 * up[j];
      if (down) v -= inv_hs2 * down[j];
      const std::size_t jl = j == 0 ? m - 1 : j - 1;
      const std::size_t jr = j + 1 == m ? 0 : j + 1;
      v -= inv_ht2 * (row[jl] + row[jr]);
      out[j] = v;
    };
    edge(0);
    std::size_t j = 1;
    for (; j + 4 < m; j += 4) {
      const __m256d xc = _mm256_loadu_pd(row + j);
      __m256d v = _mm256_mul_pd(_mm256_add_pd(vc, _mm256_loadu_pd(dg + j)), xc);
      if (up) v = _mm256_fnmadd_pd(vs, _mm256_loadu_pd(up + j), v);
      if (down) v = _mm256_fnmadd_pd(vs, _mm256_loadu_pd(down + j), v);
      const __m256d lr = _mm256_add_pd(_mm256_loadu_pd(row + j - 1), _mm256_loadu_pd(row + j + 1));
      v = _mm256_fnmadd_pd(vt, lr, v);
      _mm256_storeu_pd(out + j, v);
    }
    for (; j < m; ++j) edge(j);
  }
}

void signed_power_avx2(const double* x, double* y, std::size_t n, double p) {
  std::size_t i = 0;
  if (p == 4.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_mul_pd(v, v), v));
    }
    for (; i < n; ++i) y[i] = x[i] * x[i] * x[i];
    return;
  }
  if (p == 3.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      _mm256_storeu_pd(y + i, _mm256_mul_pd(vabs(v), v));
    }
    for (; i < n; ++i) y[i] = std::fabs(x[i]) * x[i];
    return;
  }
  scalar_kernels().signed_power(x, y, n, p);
}

double abs_power_sum_avx2(const double* x, std::size_t n, double p) {
  if (p == 2.0) return sumsq_avx2(x, n);
  if (p == 4.0) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      const __m256d sq = _mm256_mul_pd(v, v);
      acc = _mm256_fmadd_pd(sq, sq, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
      const double sq = x[i] * x[i];
      s += sq * sq;
    }
    return s;
  }
  return scalar_kernels().abs_power_sum(x, n, p);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2",           dot_avx2,          axpby_avx2,          dirichlet_rows_avx2,
      thomas_solve_avx2, stencil_cylinder_avx2, signed_power_avx2, abs_power_sum_avx2,
  };
  return table;
}

}  // namespace klt::simd
