#include "klt/gns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "klt/simd/kernels.hpp"

namespace klt {
namespace {

double dual_q(double p) { return p / (p - 2.0); }

double energy(const Discretization& disc, const double* u, double lambda) {
  return disc.dirichlet(u) + lambda * disc.l2_sq(u);
}

double fraction_of(const Discretization& disc, const std::vector<double>& u) {
  if (disc.grid().mode == GnsMode::symmetric) return 0.0;
  const double total = disc.dirichlet(u.data());
  if (!(total > 0.0)) return 0.0;
  return disc.angular_dirichlet(u.data()) / total;
}

std::vector<double> kicked(const Discretization& disc, const std::vector<double>& u, double kick) {
  const CylinderGrid& g = disc.grid();
  std::vector<double> out = u;
  const std::size_t n = g.s.n;
  if (g.mode == GnsMode::general2d) {
    const auto& harm = disc.harmonic();
    const std::size_t m = g.m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] *= 1.0 + kick * harm[j];
  } else if (g.mode == GnsMode::two_mode) {
    for (std::size_t i = 0; i < n; ++i) out[2 * i + 1] += kick * u[2 * i];
  }
  return out;
}

std::vector<double> line_profile(const CylinderGrid& g, double lambda) {
  const double q = dual_q(g.p);
  const OptimalEigenfunction phi{q, std::sqrt(lambda) / (q - 1.0)};
  std::vector<double> out(g.s.n);
  for (int i = 0; i < g.s.n; ++i) out[i] = phi(g.s.node(i));
  return out;
}

std::vector<double> extend_symmetric(const CylinderGrid& g, const std::vector<double>& line) {
  const std::size_t w = g.width();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (g.mode == GnsMode::two_mode)
      out[2 * i] = line[i];
    else
      for (std::size_t j = 0; j < w; ++j) out[i * w + j] = line[i];
  }
  return out;
}

// L^1_{gamma,d} is expensive to shoot for; memoize per (d, p)
double cached_radial_constant(int d, double p) {
  static std::mutex mtx;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_pair(d, p);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double v = radial_gns_constant(d, p);
  cache.emplace(key, v);
  return v;
}

void set_field(GnsConfig& c, const std::string& name, const std::string& value, int line_no) {
  const auto bad = [&] {
    return ValidationError("config line " + std::to_string(line_no) + ": bad value for '" + name + "'");
  };
  const auto as_double = [&] {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size() || !std::isfinite(v)) throw bad();
      return v;
    } catch (const std::logic_error&) {
      throw bad();
    }
  };
  const auto as_int = [&] {
    int v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) throw bad();
    return v;
  };
  if (name == "n_s") c.n_s = as_int();
  else if (name == "window") c.window = as_double();
  else if (name == "m_min") c.m_min = as_int();
  else if (name == "m_per_root") c.m_per_root = as_double();
  else if (name == "quad_nodes") c.quad_nodes = as_int();
  else if (name == "step") c.step = as_double();
  else if (name == "armijo") c.armijo = as_double();
  else if (name == "tol") c.tol = as_double();
  else if (name == "max_iter") c.max_iter = as_int();
  else if (name == "starts") c.starts = as_int();
  else if (name == "kick") c.kick = as_double();
  else if (name == "seed") c.seed = static_cast<unsigned>(as_int());
  else if (name == "lambda_tol") c.lambda_tol = as_double();
  else if (name == "lambda_max_iter") c.lambda_max_iter = as_int();
  else if (name == "threshold_tol") c.threshold_tol = as_double();
  else if (name == "threshold_lo") c.threshold_lo = as_double();
  else if (name == "threshold_hi") c.threshold_hi = as_double();
  else if (name == "detect") c.detect = as_double();
  else throw ValidationError("config line " + std::to_string(line_no) + ": unknown setting '" + name + "'");
}

void validate(const GnsConfig& c) {
  if (c.n_s < 16) throw ValidationError("config: n_s must be >= 16");
  if (!(c.window > 0.0)) throw ValidationError("config: window must be positive");
  if (c.m_min < 4 || (c.m_min & (c.m_min - 1)) != 0) throw ValidationError("config: m_min must be a power of two >= 4");
  if (c.quad_nodes < 2) throw ValidationError("config: quad_nodes must be >= 2");
  if (!(c.step > 0.0 && c.step < 2.0)) throw ValidationError("config: step must lie in (0, 2)");
  if (!(c.tol > 0.0)) throw ValidationError("config: tol must be positive");
  if (c.max_iter < 1) throw ValidationError("config: max_iter must be >= 1");
  if (c.starts < 1) throw ValidationError("config: starts must be >= 1");
  if (!(c.lambda_tol > 0.0)) throw ValidationError("config: lambda_tol must be positive");
  if (!(c.threshold_tol > 0.0)) throw ValidationError("config: threshold_tol must be positive");
  if (!(c.threshold_lo > 0.0 && c.threshold_lo < c.threshold_hi))
    throw ValidationError("config: need 0 < threshold_lo < threshold_hi");
}

}  // namespace

GnsConfig parse_gns_config(const std::string& text) {
  GnsConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected name=value");
    set_field(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
  }
  validate(c);
  return c;
}

GnsConfig load_gns_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_gns_config(buf.str());
}

GnsMode default_mode(const ManifoldSpec& manifold) {
  if (manifold.dim() == 1) return GnsMode::general2d;
  if (manifold.is_sphere()) return GnsMode::two_mode;
  return GnsMode::symmetric;
}

CylinderGrid design_grid(GnsMode mode, double lambda_g, const InequalityParams& params, const ManifoldSpec& manifold,
                         const GnsConfig& config) {
  if (!(lambda_g > 0.0)) throw ValidationError("grid design requires lambda > 0");
  CylinderGrid g;
  g.mode = mode;
  g.s = symmetric_grid(config.window / std::sqrt(lambda_g), config.n_s);
  g.d = params.d;
  g.p = params.p;
  g.lambda1 = manifold.lambda1();
  switch (mode) {
    case GnsMode::symmetric: g.m = 1; break;
    case GnsMode::general2d: {
      if (manifold.dim() != 1) throw ValidationError("general2d requires a one-dimensional M");
      const double want = config.m_per_root * std::sqrt(lambda_g / g.lambda1);
      int m = config.m_min;
      while (m < want) m *= 2;
      g.m = m;
      break;
    }
    case GnsMode::two_mode:
      if (!manifold.is_sphere()) throw ValidationError("two_mode requires M to be a sphere");
      g.m = config.quad_nodes;
      break;
  }
  return g;
}

GnsState minimize_quotient(const Discretization& disc, double lambda, std::vector<double> u, const GnsConfig& config) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  const std::size_t n = disc.size();
  if (u.size() != n) throw ValidationError("initial state does not match the discretization");
  const auto& k = simd::kernels();
  const double p = disc.grid().p;

  const auto normalize = [&](std::vector<double>& x) {
    const double lp = disc.lp_pow(x.data());
    if (!(lp > 0.0) || !std::isfinite(lp)) throw ValidationError("state must not vanish");
    k.axpby(0.0, x.data(), std::pow(lp, -1.0 / p), x.data(), n);
  };
  normalize(u);
  double a = energy(disc, u.data(), lambda);

  std::vector<double> dir(n), trial(n);
  double gnorm = std::numeric_limits<double>::infinity();
  int it = 0;
  for (;; ++it) {
    // dir = u - a P(|u|^(p-2) u), the gradient in the a_lambda metric
    disc.nonlinear(u.data(), dir.data());
    disc.precondition(lambda, dir.data());
    k.axpby(1.0, u.data(), -a, dir.data(), n);
    const double a_dir = std::max(0.0, energy(disc, dir.data(), lambda));
    gnorm = std::sqrt(a_dir / a);
    if (gnorm <= config.tol || it >= config.max_iter) break;

    const double cross = a * (1.0 - disc.lp_pow(u.data()));  // a(u, dir)
    const double slope = 2.0 * a_dir;
    double tau = config.step;
    bool accepted = false;
    double a_new = a;
    double lp_new = 1.0;
    for (int ls = 0; ls < 40; ++ls) {
      std::copy(u.begin(), u.end(), trial.begin());
      k.axpby(-tau, dir.data(), 1.0, trial.data(), n);
      lp_new = disc.lp_pow(trial.data());
      a_new = a - 2.0 * tau * cross + tau * tau * a_dir;
      const double q_new = a_new / std::pow(lp_new, 2.0 / p);
      const bool armijo = q_new <= a - config.armijo * tau * slope;
      const bool in_noise = tau * slope < 1e-13 * a && q_new <= a * (1.0 + 1e-13);
      if (armijo || in_noise) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
    u.swap(trial);
    const double scale = std::pow(lp_new, -1.0 / p);
    k.axpby(0.0, u.data(), scale, u.data(), n);
    a = a_new * scale * scale;
    if (it % 25 == 24) {
      normalize(u);
      a = energy(disc, u.data(), lambda);
    }
  }

  double sum = 0.0;
  for (double x : u) sum += x;
  if (sum < 0.0)
    for (double& x : u) x = -x;

  GnsState st;
  st.grid = disc.grid();
  st.lambda = lambda;
  st.quotient = energy(disc, u.data(), lambda) / std::pow(disc.lp_pow(u.data()), 2.0 / p);
  st.gradient_norm = gnorm;
  st.iterations = it;
  st.u = std::move(u);
  return st;
}

std::vector<std::vector<double>> initial_states(const Discretization& disc, double lambda, const GnsConfig& config) {
  const CylinderGrid& g = disc.grid();
  const std::vector<double> line = line_profile(g, lambda);
  const std::vector<double> sym = extend_symmetric(g, line);
  std::vector<std::vector<double>> starts{sym};
  if (g.mode == GnsMode::symmetric) return starts;
  starts.push_back(kicked(disc, sym, config.kick));
  if (config.starts >= 3) {
    std::vector<double> third(g.size());
    if (g.mode == GnsMode::general2d) {
      // bump concentrated around (0, 0) in natural coordinates
      const double q = dual_q(g.p);
      const OptimalEigenfunction phi{q, std::sqrt(lambda) / (q - 1.0)};
      const int m = g.m;
      for (int i = 0; i < g.s.n; ++i) {
        const double s = g.s.node(i);
        for (int j = 0; j < m; ++j) {
          double t = 2.0 * std::numbers::pi * j / m;
          if (t > std::numbers::pi) t -= 2.0 * std::numbers::pi;
          third[static_cast<std::size_t>(i) * m + j] = phi(std::sqrt(s * s + t * t / g.lambda1));
        }
      }
    } else {
      third = kicked(disc, sym, 1.0);
    }
    starts.push_back(std::move(third));
  }
  for (int extra = 3; extra < config.starts; ++extra) {
    std::mt19937_64 rng(config.seed + static_cast<unsigned>(extra));
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::vector<double> x = kicked(disc, sym, config.kick);
    const std::size_t w = g.width();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += config.kick * line[i / w] * unit(rng);
    starts.push_back(std::move(x));
  }
  return starts;
}

GnsResult gns_constant(const Discretization& disc, double lambda, const InequalityParams& params,
                       const GnsConfig& config, const std::vector<double>* warm) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (std::fabs(disc.grid().p - params.p) > 1e-12) throw ValidationError("discretization exponent differs from params");
  std::vector<std::vector<double>> starts;
  if (warm) {
    starts.push_back(*warm);
    if (disc.grid().mode != GnsMode::symmetric) starts.push_back(kicked(disc, *warm, config.kick));
  } else {
    starts = initial_states(disc, lambda, config);
  }

  GnsState best;
  bool have = false;
  for (auto& start : starts) {
    GnsState st = minimize_quotient(disc, lambda, std::move(start), config);
    if (!have || st.quotient < best.quotient) {
      best = std::move(st);
      have = true;
    }
  }
  if (disc.grid().mode != GnsMode::symmetric) best.symmetric_fallback = fraction_of(disc, best.u) < config.detect;
  if (best.gradient_norm > config.tol)
    throw GnsNonConvergence("optimizer stopped at gradient norm " + std::to_string(best.gradient_norm) +
                                " after " + std::to_string(best.iterations) + " iterations",
                            best);
  return {best.quotient, std::move(best)};
}

GnsResult gns_constant(double lambda, const InequalityParams& params, const ManifoldSpec& manifold, GnsMode mode,
                       const GnsConfig& config) {
  validate(config);
  const Discretization disc(design_grid(mode, lambda, params, manifold, config));
  return gns_constant(disc, lambda, params, config);
}

double symmetry_fraction(const GnsState& state) {
  if (state.grid.mode == GnsMode::symmetric) return 0.0;
  const Discretization disc(state.grid);
  return fraction_of(disc, state.u);
}

double semiclassical_lambda(double mu, const InequalityParams& params, const ManifoldSpec& manifold) {
  const double volume = manifold.natural_volume();
  if (!(volume > 0.0)) return 0.0;
  const double gamma = params.q - 0.5 * params.d;
  const double l1 = cached_radial_constant(params.d, params.p);
  return std::pow(volume * l1 * std::pow(mu, params.q), 1.0 / gamma);
}

namespace {

struct RootState {
  double lambda;
  GnsResult best;
};

// mu(lambda) = mu on a fixed discretization. mu(lambda) is concave and
// increasing, so Newton steps from the left stay left of the root.
RootState solve_root(const Discretization& disc, double mu, const InequalityParams& params, const GnsConfig& config,
                     double lambda0, double lo, double hi, const std::vector<double>* warm,
                     std::vector<std::pair<double, double>>& samples) {
  bool lo_ok = false;
  bool hi_ok = false;
  double lambda = lambda0;
  std::vector<double> current;
  if (warm) current = *warm;
  int widen = 0;
  for (int it = 0; it < config.lambda_max_iter; ++it) {
    GnsResult r = gns_constant(disc, lambda, params, config, current.empty() ? nullptr : &current);
    samples.emplace_back(lambda, r.mu);
    const double f = r.mu - mu;
    if (f < 0.0) {
      lo = lambda;
      lo_ok = true;
    } else {
      hi = lambda;
      hi_ok = true;
    }
    current = r.state.u;
    if (std::fabs(f) <= config.lambda_tol * mu) return {lambda, std::move(r)};
    const double slope = disc.l2_sq(r.state.u.data()) / std::pow(disc.lp_pow(r.state.u.data()), 2.0 / params.p);
    const double newton = lambda - f / slope;
    if (newton > lo && newton < hi) {
      lambda = newton;
    } else if (!hi_ok && newton >= hi) {
      if (++widen > 40) break;
      hi *= 2.0;
      lambda = hi;
    } else if (!lo_ok && newton <= lo) {
      if (++widen > 40) break;
      lo *= 0.5;
      lambda = lo;
    } else {
      lambda = 0.5 * (lo + hi);
    }
    if (lo_ok && hi_ok && hi - lo <= 1e-15 * hi) return {lambda, std::move(r)};
  }
  throw InconclusiveError("could not solve mu(lambda) = " + std::to_string(mu), samples);
}

}  // namespace

LambdaResult capital_lambda(double mu, const InequalityParams& params, const ManifoldSpec& manifold, GnsMode mode,
                            const GnsConfig& config) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  validate(config);
  LambdaResult out;
  out.lambda_R = lambda_R(mu, params);
  const double sc = mode == GnsMode::symmetric ? 0.0 : semiclassical_lambda(mu, params, manifold);
  double guess = std::max(out.lambda_R, sc);
  double lambda_g = guess;

  RootState root{};
  std::vector<double> warm;
  for (int regrid = 0;; ++regrid) {
    const Discretization disc(design_grid(mode, lambda_g, params, manifold, config));
    root = solve_root(disc, mu, params, config, guess, 0.999 * out.lambda_R, 2.0 * std::max(out.lambda_R, sc), nullptr,
                      out.samples);
    if (mode != GnsMode::symmetric) {
      // a cold multi-start at the root may find a lower branch
      for (int check = 0; check < 3; ++check) {
        GnsResult cold = gns_constant(disc, root.lambda, params, config);
        if (!(cold.mu < root.best.mu - 1e-9 * mu)) break;
        root = solve_root(disc, mu, params, config, root.lambda, 0.999 * out.lambda_R, root.lambda, &cold.state.u,
                          out.samples);
      }
    }
    out.regrids = regrid;
    if ((root.lambda <= 2.0 * lambda_g && root.lambda >= 0.5 * lambda_g) || regrid >= 3) {
      // discretization estimate: discrete symmetric branch against the closed form
      CylinderGrid sg = disc.grid();
      sg.mode = GnsMode::symmetric;
      sg.m = 1;
      const Discretization sym(sg);
      const GnsResult s = gns_constant(sym, root.lambda, params, config);
      const double slope = sym.l2_sq(s.state.u.data()) / std::pow(sym.lp_pow(s.state.u.data()), 2.0 / params.p);
      out.discretization_error = std::fabs(s.mu - invert_lambda_R(root.lambda, params)) / slope;
      const double root_slope =
          disc.l2_sq(root.best.state.u.data()) / std::pow(disc.lp_pow(root.best.state.u.data()), 2.0 / params.p);
      out.tolerance = std::fabs(root.best.mu - mu) / root_slope + config.lambda_tol * mu / root_slope +
                      out.discretization_error;
      break;
    }
    lambda_g = root.lambda;
    guess = root.lambda;
  }
  out.value = root.lambda;
  out.state = std::move(root.best.state);
  return out;
}

CylinderPotential potential_from_state(const GnsState& state, double mu, const InequalityParams& params) {
  if (!(mu > 0.0)) throw ValidationError("mu must be positive");
  if (state.grid.mode == GnsMode::two_mode)
    throw ValidationError("two-mode states are used for threshold detection only");
  const Discretization disc(state.grid);
  const double p = params.p;
  const double lp = disc.lp_pow(state.u.data());
  if (!(lp > 0.0)) throw ValidationError("state vanishes");
  const double scale = mu / std::pow(lp, (p - 2.0) / p);
  std::vector<double> v(state.u.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::fabs(state.u[i]);
    v[i] = a == 0.0 ? 0.0 : scale * std::pow(a, p - 2.0);
  }
  if (state.grid.mode == GnsMode::symmetric)
    return CylinderPotential::symmetric({state.grid.s, std::move(v), std::nullopt});
  return CylinderPotential::general2d(state.grid.s, state.grid.m, std::move(v));
}

double evaluate_J(const CylinderPotential& v, const InequalityParams& params, const ManifoldSpec& manifold) {
  CylinderGrid g;
  g.s = v.grid;
  g.d = params.d;
  g.p = params.p;
  if (v.kind == CylinderPotential::Kind::symmetric) {
    g.mode = GnsMode::symmetric;
    g.m = 1;
  } else {
    if (manifold.dim() != 1) throw ValidationError("general2d potentials live on R x S^1");
    g.mode = GnsMode::general2d;
    g.m = v.m;
    g.lambda1 = manifold.lambda1();
  }
  const Discretization disc(g);
  const double q = params.q;
  std::vector<double> w(v.values.size());
  double vq = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = v.values[i];
    if (x < 0.0 || !std::isfinite(x)) throw ValidationError("J requires a finite nonnegative potential");
    w[i] = x == 0.0 ? 0.0 : std::pow(x, 0.5 * (q - 1.0));
    if (x > 0.0) vq += std::pow(x, q);
  }
  const double den = disc.l2_sq(w.data());
  if (!(den > 0.0)) throw ValidationError("J is undefined for the zero potential");
  return (disc.weight() * vq - disc.dirichlet(w.data())) / den;
}

ThresholdResult threshold_search(const InequalityParams& params, const ManifoldSpec& manifold,
                                 const GnsConfig& config) {
  validate(config);
  ThresholdResult out;
  const RigidityParams rp = make_rigidity(params, manifold.dim() == 1 ? 0.0 : manifold.kappa(), manifold.lambda1());
  out.bounds = mu_star_bounds(rp, params);
  out.reference = instability_threshold(params, manifold);
  const GnsMode mode = default_mode(manifold);
  double mu_lo = config.threshold_lo * out.reference;
  double mu_hi = config.threshold_hi * out.reference;
  const auto narrow = [&](double a, double b) { return b - a <= config.threshold_tol * 0.5 * (a + b); };

  if (mode == GnsMode::symmetric) {
    // no angular optimization available: locate the sign change of the
    // operator-route instability coefficient
    out.method = "instability";
    const auto c = [&](double mu) {
      const double v = instability_operator_check(mu, params, manifold);
      out.samples.push_back({lambda_R(mu, params), mu, v});
      return v;
    };
    if (narrow(mu_lo, mu_hi)) {
      out.mu_lo = mu_lo;
      out.mu_hi = mu_hi;
      return out;
    }
    if (!(c(mu_lo) > 0.0 && c(mu_hi) < 0.0)) {
      std::vector<std::pair<double, double>> s;
      for (const auto& x : out.samples) s.emplace_back(x.mu, x.fraction);
      throw InconclusiveError("instability coefficient does not change sign on the initial bracket", s);
    }
    while (!narrow(mu_lo, mu_hi)) {
      const double mid = 0.5 * (mu_lo + mu_hi);
      (c(mid) > 0.0 ? mu_lo : mu_hi) = mid;
    }
    out.mu_lo = mu_lo;
    out.mu_hi = mu_hi;
    return out;
  }

  out.method = to_string(mode);
  if (narrow(mu_lo, mu_hi)) {
    out.mu_lo = mu_lo;
    out.mu_hi = mu_hi;
    return out;
  }
  const Discretization disc(design_grid(mode, lambda_R(out.reference, params), params, manifold, config));
  const auto probe = [&](double lambda) {
    const GnsResult r = gns_constant(disc, lambda, params, config);
    const ThresholdSample s{lambda, r.mu, fraction_of(disc, r.state.u)};
    out.samples.push_back(s);
    return s;
  };
  const auto inconclusive = [&](const std::string& why) {
    std::vector<std::pair<double, double>> s;
    for (const auto& x : out.samples) s.emplace_back(x.mu, x.fraction);
    return InconclusiveError(why, s);
  };

  double lam_lo = lambda_R(mu_lo, params);
  double lam_hi = lambda_R(mu_hi, params);
  ThresholdSample lo = probe(lam_lo);
  ThresholdSample hi = probe(lam_hi);
  if (!(lo.fraction < config.detect)) throw inconclusive("lower end of the initial bracket is already broken");
  if (!(hi.fraction >= config.detect)) throw inconclusive("upper end of the initial bracket is still symmetric");
  while (!narrow(lo.mu, hi.mu)) {
    const ThresholdSample mid = probe(0.5 * (lam_lo + lam_hi));
    if (mid.fraction < config.detect) {
      lo = mid;
      lam_lo = mid.lambda;
    } else {
      hi = mid;
      lam_hi = mid.lambda;
    }
    if (lam_hi - lam_lo <= 1e-14 * lam_hi) break;
  }

  std::vector<ThresholdSample> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  bool seen_broken = false;
  for (const auto& s : sorted) {
    if (s.fraction >= config.detect)
      seen_broken = true;
    else if (seen_broken)
      throw inconclusive("symmetry detector is not monotone in lambda");
  }
  out.mu_lo = lo.mu;
  out.mu_hi = hi.mu;
  return out;
}

}  // namespace klt
