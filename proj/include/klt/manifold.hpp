#pragma once
// The compact factor M of the cylinder, described only by spectral data:
// Laplace-Beltrami eigenvalues with multiplicities and the Ricci lower bound
// kappa. Norms on M use the probability (volume-normalized) measure while the
// eigenvalues keep their natural-metric values.

#include <cstddef>
#include <string>
#include <vector>

namespace klt {

struct Eigenpair {
  double lambda;
  long multiplicity;
};

class ManifoldSpec {
 public:
  /// Validates: first eigenvalue 0 with multiplicity 1, the rest strictly
  /// positive and nondecreasing. The Lichnerowicz inequality is checked by
  /// lichnerowicz_check and enforced by the file loader.
  ManifoldSpec(int dim, double kappa, std::vector<Eigenpair> spectrum, std::string name,
               double natural_volume = 0.0);

  int dim() const { return dim_; }
  int cylinder_dim() const { return dim_ + 1; }
  double kappa() const { return kappa_; }
  const std::vector<Eigenpair>& spectrum() const { return spectrum_; }
  const std::string& name() const { return name_; }
  double lambda1() const { return spectrum_.at(1).lambda; }
  std::size_t mode_count() const { return spectrum_.size(); }

  /// Volume of M in its natural metric, used to translate normalized norms
  /// into Lebesgue norms; 0 when unknown.
  double natural_volume() const { return natural_volume_; }

  bool is_sphere() const { return sphere_; }

 private:
  friend ManifoldSpec sphere_spec(int d, int l_max);

  int dim_;
  double kappa_;
  std::vector<Eigenpair> spectrum_;
  std::string name_;
  double natural_volume_;
  bool sphere_ = false;
};

/// Unit sphere S^{d-1}: lambda_l = l(l+d-2) for l = 0..l_max with the
/// harmonic multiplicities, kappa = d-2.
ManifoldSpec sphere_spec(int d, int l_max);

/// Dimension of the degree-l spherical harmonics on S^{dim}.
long harmonic_multiplicity(int dim, int l);

/// kappa dim/(dim-1) <= lambda1 (+1e-12). For dim = 1 there is no Ricci
/// curvature and the check reduces to kappa <= 0.
bool lichnerowicz_check(const ManifoldSpec& spec);

/// Reads the plain-text spec: header `dim kappa`, then `lambda multiplicity`
/// lines in nondecreasing order. Throws IoError / ValidationError.
ManifoldSpec load_manifold(const std::string& path);
ManifoldSpec parse_manifold(const std::string& text, const std::string& name);

}  // namespace klt
