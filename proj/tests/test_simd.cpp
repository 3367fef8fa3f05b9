#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "klt/simd/kernels.hpp"

using namespace klt::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(a[i])));
  return worst;
}

}  // namespace

TEST_CASE("dispatch picks a table") {
  CHECK(kernels().name != nullptr);
  CHECK(std::string(scalar_kernels().name) == "scalar");
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const KernelTable* fast = avx2_kernels();
  if (!fast) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 rng(7);

  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1003u}) {
    CAPTURE(n);
    auto x = random_vector(n, rng);
    auto y = random_vector(n, rng);
    const double a = ref.dot(x.data(), y.data(), n), b = fast->dot(x.data(), y.data(), n);
    CHECK(std::fabs(a - b) <= 1e-13 * (1.0 + n));

    auto y1 = y, y2 = y;
    ref.axpby(0.3, x.data(), -1.7, y1.data(), n);
    fast->axpby(0.3, x.data(), -1.7, y2.data(), n);
    CHECK(max_rel(y1, y2) <= 1e-15);

    for (double p : {3.0, 4.0, 2.5, 6.0}) {
      CAPTURE(p);
      std::vector<double> s1(n), s2(n);
      ref.signed_power(x.data(), s1.data(), n, p);
      fast->signed_power(x.data(), s2.data(), n, p);
      CHECK(max_rel(s1, s2) <= 1e-13);
      const double t1 = ref.abs_power_sum(x.data(), n, p), t2 = fast->abs_power_sum(x.data(), n, p);
      CHECK(std::fabs(t1 - t2) <= 1e-12 * (1.0 + std::fabs(t1)));
    }
  }
}

TEST_CASE("avx2 row kernels agree with the scalar reference") {
  const KernelTable* fast = avx2_kernels();
  if (!fast) return;
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 rng(11);

  for (std::size_t width : {1u, 2u, 3u, 8u, 9u, 32u}) {
    const std::size_t n = 37;
    CAPTURE(width);
    auto x = random_vector(n * width, rng);
    const double a = ref.dirichlet_rows(x.data(), n, width), b = fast->dirichlet_rows(x.data(), n, width);
    CHECK(std::fabs(a - b) <= 1e-12 * (1.0 + a));

    auto diag = random_vector(n * width, rng, 3.0, 5.0);
    std::vector<double> cp(n * width), dn(n * width);
    thomas_factor_batched(n, width, -1.0, diag.data(), cp.data(), dn.data());
    auto r1 = random_vector(n * width, rng), r2 = r1;
    ref.thomas_solve_batched(n, width, -1.0, cp.data(), dn.data(), r1.data());
    fast->thomas_solve_batched(n, width, -1.0, cp.data(), dn.data(), r2.data());
    CHECK(max_rel(r1, r2) <= 1e-13);

    std::vector<double> y1(n * width), y2(n * width);
    auto pot = random_vector(n * width, rng);
    ref.stencil_cylinder(n, width, 4.0, 9.0, pot.data(), x.data(), y1.data());
    fast->stencil_cylinder(n, width, 4.0, 9.0, pot.data(), x.data(), y2.data());
    CHECK(max_rel(y1, y2) <= 1e-13);
  }
}

TEST_CASE("batched Thomas solve inverts the tridiagonal system") {
  std::mt19937_64 rng(3);
  const std::size_t n = 50, width = 4;
  auto diag = random_vector(n * width, rng, 2.5, 4.0);
  auto x = random_vector(n * width, rng);
  // rhs = T x with off-diagonal -1
  std::vector<double> rhs(n * width);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < width; ++k) {
      double v = diag[i * width + k] * x[i * width + k];
      if (i > 0) v -= x[(i - 1) * width + k];
      if (i + 1 < n) v -= x[(i + 1) * width + k];
      rhs[i * width + k] = v;
    }
  std::vector<double> cp(n * width), dn(n * width);
  thomas_factor_batched(n, width, -1.0, diag.data(), cp.data(), dn.data());
  kernels().thomas_solve_batched(n, width, -1.0, cp.data(), dn.data(), rhs.data());
  CHECK(max_rel(rhs, x) <= 1e-12);
}
