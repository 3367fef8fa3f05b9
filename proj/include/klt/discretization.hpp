#pragma once
// Discrete energy spaces on the cylinder for the Gagliardo-Nirenberg problem.
//
// A field is a flat coefficient vector whose L^2 inner product (for the
// volume-normalized measure) is a constant multiple of the Euclidean one:
//
//   symmetric  u(s_i)                         n values
//   general2d  u(s_i, theta_j), M = S^1        n x m values, theta spectral
//   two_mode   a(s_i) + b(s_i) psi_1(z)        n x 2 values, M = S^{d-1}
//
// s derivatives are second-order differences with Dirichlet ends. In the
// general2d space angular derivatives are exact on the trigonometric
// interpolant (FFT). In the two_mode space |u|^p is integrated over M with
// Gauss-Gegenbauer quadrature in the coordinate t = z_1 of S^{d-1}.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "klt/line_solver.hpp"

namespace klt {

enum class GnsMode { symmetric, general2d, two_mode };

const char* to_string(GnsMode mode);
GnsMode parse_gns_mode(const std::string& name);

struct CylinderGrid {
  GnsMode mode = GnsMode::symmetric;
  Grid1D s;
  int m = 1;            // angular points (general2d) or quadrature nodes (two_mode)
  int d = 2;            // cylinder dimension
  double lambda1 = 1.0; // first nonzero eigenvalue of M
  double p = 4.0;

  std::size_t width() const;  // coefficients per s node
  std::size_t size() const { return static_cast<std::size_t>(s.n) * width(); }
};

/// Gauss quadrature for the probability measure proportional to
/// (1 - t^2)^((d-3)/2) on [-1, 1] (distribution of a coordinate on S^{d-1}).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature sphere_coordinate_quadrature(int d, int count);

class Discretization {
 public:
  explicit Discretization(const CylinderGrid& grid);
  ~Discretization();
  Discretization(Discretization&&) noexcept;
  Discretization& operator=(Discretization&&) noexcept;
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  const CylinderGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }

  /// Constant weight w with <u, v> = w sum_i u_i v_i.
  double weight() const { return weight_; }
  double inner(const double* u, const double* v) const;
  double l2_sq(const double* u) const { return inner(u, u); }

  /// ||d_s u||^2 + ||grad_g u||^2
  double dirichlet(const double* u) const;
  /// Part of dirichlet() carried by the nonconstant modes of M.
  double angular_dirichlet(const double* u) const;
  /// integral of |u|^p
  double lp_pow(const double* u) const;

  /// Riesz representative of v -> integral |u|^(p-2) u v.
  void nonlinear(const double* u, double* out) const;
  /// Riesz representative of v -> a_lambda(u, v), the form of L + lambda.
  void apply(const double* u, double lambda, double* out) const;
  /// In place (L + lambda)^{-1}.
  void precondition(double lambda, double* inout) const;

  /// Samples on the physical grid: n (symmetric), n x m (general2d),
  /// n x nodes (two_mode, at the quadrature nodes).
  std::vector<double> physical(const double* u) const;

  /// d^order/dtheta^order of each row (general2d; order 1 or 2), exact on
  /// the trigonometric interpolant with the Nyquist term dropped for order 1.
  void angular_derivative(const double* u, int order, double* out) const;

  const Quadrature& quadrature() const { return quad_; }
  /// psi_1 at the quadrature nodes (two_mode) or sqrt2 cos theta_j (general2d).
  const std::vector<double>& harmonic() const { return harmonic_; }

 private:
  struct Fft;

  void factor(double lambda) const;
  double angular_energy_general(const double* u) const;

  CylinderGrid grid_;
  double weight_ = 1.0;
  Quadrature quad_;
  std::vector<double> harmonic_;
  std::unique_ptr<Fft> fft_;

  // factorization cache for the last lambda seen by precondition()
  mutable double cached_lambda_ = -1.0;
  mutable std::vector<double> cprime_;
  mutable std::vector<double> denom_;
};

}  // namespace klt
