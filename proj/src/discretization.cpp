#include "klt/discretization.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "klt/errors.hpp"
#include "klt/simd/kernels.hpp"

namespace klt {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex mtx;
  return mtx;
}

}  // namespace

const char* to_string(GnsMode mode) {
  switch (mode) {
    case GnsMode::symmetric: return "symmetric";
    case GnsMode::general2d: return "general2d";
    case GnsMode::two_mode: return "two_mode";
  }
  return "?";
}

GnsMode parse_gns_mode(const std::string& name) {
  if (name == "symmetric") return GnsMode::symmetric;
  if (name == "general2d") return GnsMode::general2d;
  if (name == "two_mode") return GnsMode::two_mode;
  throw ValidationError("unknown mode '" + name + "' (symmetric|general2d|two_mode)");
}

std::size_t CylinderGrid::width() const {
  switch (mode) {
    case GnsMode::symmetric: return 1;
    case GnsMode::general2d: return static_cast<std::size_t>(m);
    case GnsMode::two_mode: return 2;
  }
  return 1;
}

Quadrature sphere_coordinate_quadrature(int d, int count) {
  if (d < 2) throw ValidationError("sphere quadrature requires d >= 2");
  if (count < 2) throw ValidationError("sphere quadrature requires at least 2 nodes");
  // Golub-Welsch for the Jacobi weight with alpha = beta = a
  const double a = 0.5 * (d - 3);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    double b;
    if (k == 1 && std::fabs(a + 0.5) < 1e-14)
      b = std::sqrt(0.5);
    else
      b = std::sqrt(k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a - 1.0) * (2.0 * k + 2.0 * a + 1.0)));
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature qd;
  qd.nodes.resize(count);
  qd.weights.resize(count);
  for (int j = 0; j < count; ++j) {
    qd.nodes[j] = es.eigenvalues()(j);
    const double v0 = es.eigenvectors()(0, j);
    qd.weights[j] = v0 * v0;
  }
  return qd;
}

struct Discretization::Fft {
  int n;
  int m;
  int mc;  // m/2 + 1 complex coefficients per row
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> scratch_real;
  fftw_complex* spectrum = nullptr;

  Fft(int rows, int cols) : n(rows), m(cols), mc(cols / 2 + 1) {
    scratch_real.resize(static_cast<std::size_t>(n) * m);
    spectrum = fftw_alloc_complex(static_cast<std::size_t>(n) * mc);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int len[1] = {m};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_many_dft_r2c(1, len, n, scratch_real.data(), nullptr, 1, m, spectrum, nullptr, 1, mc,
                                     flags);
    backward = fftw_plan_many_dft_c2r(1, len, n, spectrum, nullptr, 1, mc, scratch_real.data(), nullptr, 1, m,
                                      flags);
    if (!forward || !backward) throw SolverError("FFTW planning failed", 0, 0.0);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(spectrum);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // row-wise r2c of u into `spectrum`
  void to_spectrum(const double* u) {
    std::copy(u, u + scratch_real.size(), scratch_real.begin());
    fftw_execute_dft_r2c(forward, scratch_real.data(), spectrum);
  }
  // inverse of to_spectrum (normalized); destroys `spectrum`
  void from_spectrum(double* out) {
    fftw_execute_dft_c2r(backward, spectrum, out);
    const double inv = 1.0 / m;
    for (std::size_t i = 0; i < scratch_real.size(); ++i) out[i] *= inv;
  }
  // multiplicity of coefficient k in the full spectrum
  double fold(int k) const { return (k == 0 || 2 * k == m) ? 1.0 : 2.0; }
};

Discretization::Discretization(const CylinderGrid& grid) : grid_(grid) {
  if (grid_.s.n < 16) throw ValidationError("discretization needs at least 16 s nodes");
  if (!(grid_.p > 2.0)) throw ValidationError("discretization requires p > 2");
  const double h = grid_.s.h();
  switch (grid_.mode) {
    case GnsMode::symmetric:
      grid_.m = 1;
      weight_ = h;
      break;
    case GnsMode::general2d:
      if (grid_.m < 4 || grid_.m % 2 != 0) throw ValidationError("general2d needs an even angular count >= 4");
      weight_ = h / grid_.m;
      harmonic_.resize(grid_.m);
      for (int j = 0; j < grid_.m; ++j)
        harmonic_[j] = std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * j / grid_.m);
      fft_ = std::make_unique<Fft>(grid_.s.n, grid_.m);
      break;
    case GnsMode::two_mode:
      if (grid_.d < 2) throw ValidationError("two_mode requires d >= 2");
      weight_ = h;
      quad_ = sphere_coordinate_quadrature(grid_.d, grid_.m);
      // first harmonic on S^{d-1}, unit L^2 norm: sqrt(d) t
      harmonic_.resize(grid_.m);
      for (int k = 0; k < grid_.m; ++k) harmonic_[k] = std::sqrt(static_cast<double>(grid_.d)) * quad_.nodes[k];
      break;
  }
}

Discretization::~Discretization() = default;
Discretization::Discretization(Discretization&&) noexcept = default;
Discretization& Discretization::operator=(Discretization&&) noexcept = default;

double Discretization::inner(const double* u, const double* v) const {
  return weight_ * simd::kernels().dot(u, v, size());
}

double Discretization::angular_energy_general(const double* u) const {
  fft_->to_spectrum(u);
  const int n = grid_.s.n;
  const int mc = fft_->mc;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const fftw_complex* row = fft_->spectrum + static_cast<std::size_t>(i) * mc;
    for (int k = 1; k < mc; ++k)
      acc += fft_->fold(k) * k * k * (row[k][0] * row[k][0] + row[k][1] * row[k][1]);
  }
  const double m = grid_.m;
  return grid_.lambda1 * grid_.s.h() * acc / (m * m);
}

double Discretization::dirichlet(const double* u) const {
  const auto& k = simd::kernels();
  const double h = grid_.s.h();
  const std::size_t n = grid_.s.n;
  switch (grid_.mode) {
    case GnsMode::symmetric: return k.dirichlet_rows(u, n, 1) / h;
    case GnsMode::general2d: return k.dirichlet_rows(u, n, grid_.m) / (h * grid_.m) + angular_energy_general(u);
    case GnsMode::two_mode: {
      double b2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) b2 += u[2 * i + 1] * u[2 * i + 1];
      return k.dirichlet_rows(u, n, 2) / h + grid_.lambda1 * h * b2;
    }
  }
  return 0.0;
}

double Discretization::angular_dirichlet(const double* u) const {
  const double h = grid_.s.h();
  const std::size_t n = grid_.s.n;
  switch (grid_.mode) {
    case GnsMode::symmetric: return 0.0;
    case GnsMode::general2d: {
      const std::size_t m = grid_.m;
      std::vector<double> rest(u, u + size());
      for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < m; ++j) mean += rest[i * m + j];
        mean /= m;
        for (std::size_t j = 0; j < m; ++j) rest[i * m + j] -= mean;
      }
      return simd::kernels().dirichlet_rows(rest.data(), n, m) / (h * m) + angular_energy_general(u);
    }
    case GnsMode::two_mode: {
      std::vector<double> b(n);
      double b2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        b[i] = u[2 * i + 1];
        b2 += b[i] * b[i];
      }
      return simd::kernels().dirichlet_rows(b.data(), n, 1) / h + grid_.lambda1 * h * b2;
    }
  }
  return 0.0;
}

double Discretization::lp_pow(const double* u) const {
  const auto& k = simd::kernels();
  const double p = grid_.p;
  if (grid_.mode != GnsMode::two_mode) return weight_ * k.abs_power_sum(u, size(), p);
  const std::size_t n = grid_.s.n;
  const int nodes = grid_.m;
  std::vector<double> row(nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < nodes; ++j) row[j] = std::fabs(u[2 * i] + u[2 * i + 1] * harmonic_[j]);
    for (int j = 0; j < nodes; ++j) acc += quad_.weights[j] * std::pow(row[j], p);
  }
  return weight_ * acc;
}

void Discretization::nonlinear(const double* u, double* out) const {
  const auto& k = simd::kernels();
  const double p = grid_.p;
  if (grid_.mode != GnsMode::two_mode) {
    k.signed_power(u, out, size(), p);
    return;
  }
  const std::size_t n = grid_.s.n;
  const int nodes = grid_.m;
  std::vector<double> vals(nodes), pw(nodes);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < nodes; ++j) vals[j] = u[2 * i] + u[2 * i + 1] * harmonic_[j];
    k.signed_power(vals.data(), pw.data(), nodes, p);
    double na = 0.0;
    double nb = 0.0;
    for (int j = 0; j < nodes; ++j) {
      na += quad_.weights[j] * pw[j];
      nb += quad_.weights[j] * pw[j] * harmonic_[j];
    }
    out[2 * i] = na;
    out[2 * i + 1] = nb;
  }
}

void Discretization::apply(const double* u, double lambda, double* out) const {
  const auto& k = simd::kernels();
  const double h = grid_.s.h();
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t n = grid_.s.n;
  const std::size_t w = grid_.width();
  // s part row-wise; stencil_cylinder with zero angular coupling
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < w; ++c) {
      const double left = i > 0 ? u[(i - 1) * w + c] : 0.0;
      const double right = i + 1 < n ? u[(i + 1) * w + c] : 0.0;
      const double mid = u[i * w + c];
      out[i * w + c] = (2.0 * mid - left - right) * inv_h2 + lambda * mid;
    }
  }
  switch (grid_.mode) {
    case GnsMode::symmetric: break;
    case GnsMode::two_mode:
      for (std::size_t i = 0; i < n; ++i) out[2 * i + 1] += grid_.lambda1 * u[2 * i + 1];
      break;
    case GnsMode::general2d: {
      fft_->to_spectrum(u);
      const int mc = fft_->mc;
      for (std::size_t i = 0; i < n; ++i) {
        fftw_complex* row = fft_->spectrum + i * mc;
        for (int kk = 0; kk < mc; ++kk) {
          const double f = grid_.lambda1 * kk * kk;
          row[kk][0] *= f;
          row[kk][1] *= f;
        }
      }
      std::vector<double> ang(size());
      fft_->from_spectrum(ang.data());
      k.axpby(1.0, ang.data(), 1.0, out, size());
      break;
    }
  }
}

void Discretization::factor(double lambda) const {
  if (lambda == cached_lambda_) return;
  const double h = grid_.s.h();
  const double c = 2.0 / (h * h) + lambda;
  const std::size_t n = grid_.s.n;
  std::vector<double> column_diag;
  switch (grid_.mode) {
    case GnsMode::symmetric: column_diag = {c}; break;
    case GnsMode::two_mode: column_diag = {c, c + grid_.lambda1}; break;
    case GnsMode::general2d: {
      const int mc = fft_->mc;
      column_diag.resize(2 * static_cast<std::size_t>(mc));
      for (int kk = 0; kk < mc; ++kk) column_diag[2 * kk] = column_diag[2 * kk + 1] = c + grid_.lambda1 * kk * kk;
      break;
    }
  }
  const std::size_t w = column_diag.size();
  std::vector<double> diag(n * w);
  for (std::size_t i = 0; i < n; ++i) std::copy(column_diag.begin(), column_diag.end(), diag.begin() + i * w);
  cprime_.assign(n * w, 0.0);
  denom_.assign(n * w, 0.0);
  simd::thomas_factor_batched(n, w, -1.0 / (h * h), diag.data(), cprime_.data(), denom_.data());
  cached_lambda_ = lambda;
}

void Discretization::precondition(double lambda, double* inout) const {
  if (!(lambda > 0.0)) throw ValidationError("preconditioner requires lambda > 0");
  factor(lambda);
  const auto& k = simd::kernels();
  const double h = grid_.s.h();
  const double off = -1.0 / (h * h);
  const std::size_t n = grid_.s.n;
  switch (grid_.mode) {
    case GnsMode::symmetric: k.thomas_solve_batched(n, 1, off, cprime_.data(), denom_.data(), inout); break;
    case GnsMode::two_mode: k.thomas_solve_batched(n, 2, off, cprime_.data(), denom_.data(), inout); break;
    case GnsMode::general2d: {
      fft_->to_spectrum(inout);
      const std::size_t w = 2 * static_cast<std::size_t>(fft_->mc);
      k.thomas_solve_batched(n, w, off, cprime_.data(), denom_.data(), reinterpret_cast<double*>(fft_->spectrum));
      fft_->from_spectrum(inout);
      break;
    }
  }
}

void Discretization::angular_derivative(const double* u, int order, double* out) const {
  if (grid_.mode != GnsMode::general2d) throw ValidationError("angular derivatives need the general2d space");
  if (order != 1 && order != 2) throw ValidationError("angular derivative order must be 1 or 2");
  fft_->to_spectrum(u);
  const int mc = fft_->mc;
  const int m = grid_.m;
  for (int i = 0; i < grid_.s.n; ++i) {
    fftw_complex* row = fft_->spectrum + static_cast<std::size_t>(i) * mc;
    for (int kk = 0; kk < mc; ++kk) {
      const double re = row[kk][0];
      const double im = row[kk][1];
      if (order == 1) {
        const double f = 2 * kk == m ? 0.0 : kk;
        row[kk][0] = -f * im;
        row[kk][1] = f * re;
      } else {
        row[kk][0] = -kk * kk * re;
        row[kk][1] = -kk * kk * im;
      }
    }
  }
  fft_->from_spectrum(out);
}

std::vector<double> Discretization::physical(const double* u) const {
  if (grid_.mode != GnsMode::two_mode) return std::vector<double>(u, u + size());
  const std::size_t n = grid_.s.n;
  const int nodes = grid_.m;
  std::vector<double> out(n * nodes);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < nodes; ++j) out[i * nodes + j] = u[2 * i] + u[2 * i + 1] * harmonic_[j];
  return out;
}

}  // namespace klt
