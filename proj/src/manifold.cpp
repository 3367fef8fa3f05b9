#include "klt/manifold.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "klt/errors.hpp"

namespace klt {
namespace {

bool lichnerowicz_holds(int dim, double kappa, double lambda1) {
  if (dim == 1) return kappa <= 0.0;
  return kappa * dim / (dim - 1.0) <= lambda1 + 1e-12;
}

long binomial(long n, long k) {
  if (k < 0 || n < k) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double sphere_area(int dim) {
  // |S^dim| = 2 pi^((dim+1)/2) / Gamma((dim+1)/2)
  const double a = 0.5 * (dim + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

}  // namespace

ManifoldSpec::ManifoldSpec(int dim, double kappa, std::vector<Eigenpair> spectrum, std::string name,
                           double natural_volume)
    : dim_(dim), kappa_(kappa), spectrum_(std::move(spectrum)), name_(std::move(name)),
      natural_volume_(natural_volume) {
  if (dim_ < 1) throw ValidationError("manifold dimension must be >= 1");
  if (spectrum_.size() < 2) throw ValidationError("manifold spectrum needs lambda_0 = 0 and lambda_1 > 0");
  if (spectrum_[0].lambda != 0.0 || spectrum_[0].multiplicity != 1)
    throw ValidationError("lambda_0 must be 0 with multiplicity 1 (M connected)");
  for (std::size_t i = 1; i < spectrum_.size(); ++i) {
    if (!(spectrum_[i].lambda > 0.0)) throw ValidationError("eigenvalues beyond lambda_0 must be positive");
    if (spectrum_[i].lambda < spectrum_[i - 1].lambda) throw ValidationError("eigenvalues must be nondecreasing");
    if (spectrum_[i].multiplicity < 1) throw ValidationError("multiplicities must be >= 1");
  }
  if (!std::isfinite(kappa_)) throw ValidationError("kappa must be finite");
}

long harmonic_multiplicity(int dim, int l) {
  if (l == 0) return 1;
  return binomial(l + dim, dim) - binomial(l + dim - 2, dim);
}

ManifoldSpec sphere_spec(int d, int l_max) {
  if (d < 2) throw ValidationError("sphere_spec requires d >= 2");
  if (l_max < 1) throw ValidationError("sphere_spec requires l_max >= 1");
  const int dim = d - 1;
  std::vector<Eigenpair> spectrum;
  for (int l = 0; l <= l_max; ++l)
    spectrum.push_back({static_cast<double>(l) * (l + d - 2), harmonic_multiplicity(dim, l)});
  ManifoldSpec spec(dim, d - 2.0, std::move(spectrum), "S^" + std::to_string(dim), sphere_area(dim));
  spec.sphere_ = true;
  return spec;
}

bool lichnerowicz_check(const ManifoldSpec& spec) {
  return lichnerowicz_holds(spec.dim(), spec.kappa(), spec.lambda1());
}

ManifoldSpec parse_manifold(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int dim = 0;
  double kappa = 0.0;
  bool have_header = false;
  std::vector<Eigenpair> spectrum;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string probe;
    if (!(ls >> probe)) continue;
    ls.clear();
    ls.str(line);
    if (!have_header) {
      if (!(ls >> dim >> kappa)) throw IoError(name + ":" + std::to_string(line_no) + ": expected `dim kappa`");
      have_header = true;
      continue;
    }
    Eigenpair e{};
    if (!(ls >> e.lambda >> e.multiplicity))
      throw IoError(name + ":" + std::to_string(line_no) + ": expected `lambda multiplicity`");
    spectrum.push_back(e);
  }
  if (!have_header) throw IoError(name + ": empty manifold spec");
  ManifoldSpec spec(dim, kappa, std::move(spectrum), name);
  if (!lichnerowicz_check(spec))
    throw ValidationError(name + ": spectrum violates the Lichnerowicz bound kappa dim/(dim-1) <= lambda_1");
  return spec;
}

ManifoldSpec load_manifold(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifold spec " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_manifold(buf.str(), path);
}

}  // namespace klt
