// klt: command-line driver for the Keller-Lieb-Thirring solvers.
//
//   klt constants --d 2 --q 2 --sphere
//   klt eigen line --optimal-mu 2.3094 --q 2
//   klt eigen cylinder --optimal-mu 1.5 --q 2 --sphere-d 2
//   klt threshold --d 2 --q 2
//   klt sweep --d 2 --q 2 --mu 0.5:2.0:10
//   klt verify --quick
//
// Exit codes: 0 success, 2 invalid input, 3 I/O, 4 solver failure,
// 5 acceptance failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "klt/acceptance.hpp"
#include "klt/cylinder.hpp"
#include "klt/errors.hpp"
#include "klt/gns.hpp"
#include "klt/io.hpp"
#include "klt/line_solver.hpp"
#include "klt/manifold.hpp"
#include "klt/params.hpp"

namespace {

using json = nlohmann::ordered_json;

enum Exit { ok = 0, invalid = 2, io_failure = 3, solver_failure = 4, acceptance_failure = 5 };

struct ManifoldChoice {
  bool sphere = false;
  std::string file;
  int l_max = 16;
};

std::optional<klt::ManifoldSpec> pick_manifold(const ManifoldChoice& c, int d, bool default_sphere) {
  if (!c.file.empty()) {
    klt::ManifoldSpec m = klt::load_manifold(c.file);
    if (m.cylinder_dim() != d)
      throw klt::ValidationError("manifold dimension " + std::to_string(m.dim()) + " does not match d - 1 = " +
                                 std::to_string(d - 1));
    return m;
  }
  if (c.sphere || default_sphere) return klt::sphere_spec(d, c.l_max);
  return std::nullopt;
}

klt::GnsConfig pick_config(const std::string& path) {
  return path.empty() ? klt::GnsConfig{} : klt::load_gns_config(path);
}

std::string num(double x) { return klt::format_double(x); }

// --- constants -------------------------------------------------------------

struct ConstantsArgs {
  int d = 2;
  double q = 2.0;
  std::optional<double> n;
  ManifoldChoice manifold;
  std::string format = "text";
};

int cmd_constants(const ConstantsArgs& a) {
  const klt::InequalityParams params = klt::make_params(a.d, a.q);
  json j;
  j["schema"] = 1;
  j["d"] = a.d;
  j["q"] = a.q;
  j["p"] = params.p;
  j["beta"] = params.beta;
  j["gamma"] = params.gamma;
  j["mu1"] = klt::mu_one(params);
  if (const auto m = pick_manifold(a.manifold, a.d, false)) {
    const double n = a.n.value_or(2.0 * a.q);
    const double kappa = m->dim() == 1 ? 0.0 : m->kappa();
    const klt::RigidityParams rp = klt::make_rigidity(a.d, n, kappa, m->lambda1());
    j["manifold"] = m->name();
    j["lambda1_M"] = m->lambda1();
    j["kappa"] = kappa;
    j["n"] = n;
    j["delta"] = rp.delta;
    try {
      j["theta_star"] = klt::theta_star(rp);
      j["lambda_star"] = klt::lambda_star(rp);
      const klt::MuStarBounds b = klt::mu_star_bounds(rp, params);
      j["mu_star_lower"] = b.lower;
      j["mu_star_upper"] = b.upper;
    } catch (const klt::ValidationError& e) {
      j["theta_star"] = nullptr;
      j["note"] = e.what();
    }
    j["instability_threshold"] = klt::instability_threshold(params, *m);
  }
  if (a.format == "json") {
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [key, value] : j.items()) {
      if (key == "schema") continue;
      std::cout << key << " = " << (value.is_number_float() ? num(value.get<double>()) : value.dump()) << "\n";
    }
  }
  return ok;
}

// --- eigen -----------------------------------------------------------------

struct EigenArgs {
  std::string kind;
  std::string potential;
  std::string potential_2d;
  std::optional<double> optimal_mu;
  double q = 2.0;
  int n = 4001;
  int sphere_d = 2;
  std::string manifold_file;
  int l_max = -1;
  std::string modes_csv;
  std::string format = "csv";
};

void emit_eigen(const EigenArgs& a, const json& row) {
  if (a.format == "json") {
    std::cout << row.dump() << "\n";
    return;
  }
  std::vector<std::string> head;
  std::vector<std::string> vals;
  for (const auto& [key, value] : row.items()) {
    if (key == "schema") continue;
    head.push_back(key);
    if (value.is_number_float())
      vals.push_back(num(value.get<double>()));
    else if (value.is_string())
      vals.push_back(value.get<std::string>());
    else
      vals.push_back(value.dump());
  }
  std::cout << klt::csv_row(head) << klt::csv_row(vals);
}

klt::SampledPotential1D eigen_line_potential(const EigenArgs& a) {
  if (!a.potential.empty()) return klt::load_potential_1d(a.potential);
  if (!a.optimal_mu) throw klt::ValidationError("give --potential FILE or --optimal-mu MU");
  if (!(a.q > 1.0)) throw klt::ValidationError("q must satisfy q > 1");
  const klt::OptimalPotential v = klt::optimal_potential(*a.optimal_mu, a.q);
  return klt::sample_potential(klt::optimal_family_grid(*a.optimal_mu, a.q, a.n), [&](double s) { return v(s); });
}

int cmd_eigen(const EigenArgs& a) {
  json row;
  row["schema"] = 1;
  row["kind"] = a.kind;
  if (a.kind == "line") {
    const klt::SampledPotential1D v = eigen_line_potential(a);
    const klt::SpectralResult r = klt::ground_state_1d(v);
    row["eigenvalue"] = r.eigenvalue;
    row["extrapolated"] = r.extrapolated;
    row["lambda1"] = r.lambda1_extrapolated();
    row["residual"] = r.residual;
    row["error_estimate"] = r.error_estimate;
    row["n"] = v.grid.n;
    row["s_min"] = v.grid.s_min;
    row["s_max"] = v.grid.s_max;
    emit_eigen(a, row);
    return ok;
  }

  const klt::ManifoldSpec m =
      a.manifold_file.empty() ? klt::sphere_spec(a.sphere_d, 16) : klt::load_manifold(a.manifold_file);
  if (!a.potential_2d.empty()) {
    if (m.dim() != 1 || std::fabs(m.lambda1() - 1.0) > 1e-12)
      throw klt::ValidationError("2D potentials are defined on R x S^1 with the unit circle");
    const klt::CylinderPotential v = klt::load_potential_2d(a.potential_2d);
    const klt::SpectralResult r = klt::ground_state_2d_oracle(v);
    row["eigenvalue"] = r.eigenvalue;
    row["extrapolated"] = r.extrapolated;
    row["lambda1"] = r.lambda1;
    row["residual"] = r.residual;
    row["error_estimate"] = r.error_estimate;
    row["minimizing_mode"] = nullptr;
    row["n"] = v.grid.n;
    row["s_min"] = v.grid.s_min;
    row["s_max"] = v.grid.s_max;
    row["m"] = v.m;
    emit_eigen(a, row);
    return ok;
  }
  const klt::SampledPotential1D line = eigen_line_potential(a);
  const klt::ModeResult r = klt::ground_state_symmetric(klt::CylinderPotential::symmetric(line), m, a.l_max);
  const double lam = m.spectrum()[r.minimizing_mode].lambda;
  row["eigenvalue"] = r.eigenvalue;
  row["extrapolated"] = r.base.extrapolated + lam;
  row["lambda1"] = std::max(0.0, -(r.base.extrapolated + lam));
  row["residual"] = r.base.residual;
  row["error_estimate"] = r.base.error_estimate;
  row["minimizing_mode"] = r.minimizing_mode;
  row["n"] = line.grid.n;
  row["s_min"] = line.grid.s_min;
  row["s_max"] = line.grid.s_max;
  row["manifold"] = m.name();
  if (!a.modes_csv.empty()) {
    std::ofstream out(a.modes_csv, std::ios::binary);
    if (!out) throw klt::IoError("cannot write " + a.modes_csv);
    out << klt::mode_result_csv(r);
    if (!out) throw klt::IoError("write error on " + a.modes_csv);
  }
  emit_eigen(a, row);
  return ok;
}

// --- threshold -------------------------------------------------------------

struct ThresholdArgs {
  int d = 2;
  double q = 2.0;
  ManifoldChoice manifold;
  std::string config;
  std::optional<double> tol;
  std::string format = "text";
};

int cmd_threshold(const ThresholdArgs& a) {
  const klt::InequalityParams params = klt::make_params(a.d, a.q);
  const klt::ManifoldSpec m = *pick_manifold(a.manifold, a.d, true);
  klt::GnsConfig config = pick_config(a.config);
  if (a.tol) config.threshold_tol = *a.tol;
  const klt::ThresholdResult t = klt::threshold_search(params, m, config);
  json j;
  j["schema"] = 1;
  j["d"] = a.d;
  j["q"] = a.q;
  j["manifold"] = m.name();
  j["method"] = t.method;
  j["interval_lower"] = t.bounds.lower;
  j["interval_upper"] = t.bounds.upper;
  j["instability_threshold"] = t.reference;
  j["bracket_lo"] = t.mu_lo;
  j["bracket_hi"] = t.mu_hi;
  j["tol"] = config.threshold_tol;
  j["probes"] = t.samples.size();
  j["n_s"] = config.n_s;
  if (a.format == "json") {
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [key, value] : j.items()) {
      if (key == "schema") continue;
      std::cout << key << " = " << (value.is_number_float() ? num(value.get<double>()) : value.dump()) << "\n";
    }
  }
  return ok;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  int d = 2;
  double q = 2.0;
  std::string mu_range;
  ManifoldChoice manifold;
  std::string mode;
  std::string config;
  int jobs = 0;
  std::string format = "json";
};

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw klt::ValidationError("--mu expects start:stop:count");
  double a = 0.0;
  double b = 0.0;
  int k = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    k = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw klt::ValidationError("--mu expects start:stop:count with numbers");
  }
  if (k < 1) throw klt::ValidationError("--mu count must be >= 1");
  if (!(a > 0.0 && b > 0.0)) throw klt::ValidationError("--mu values must be positive");
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = k == 1 ? a : a + (b - a) * i / (k - 1);
  return out;
}

int default_jobs() {
  if (const char* env = std::getenv("KLT_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

int cmd_sweep(const SweepArgs& a) {
  const klt::InequalityParams params = klt::make_params(a.d, a.q);
  const klt::ManifoldSpec m = *pick_manifold(a.manifold, a.d, true);
  const klt::GnsConfig config = pick_config(a.config);
  const klt::GnsMode mode = a.mode.empty() ? klt::default_mode(m) : klt::parse_gns_mode(a.mode);
  if (mode == klt::GnsMode::two_mode)
    throw klt::ValidationError("two_mode states serve threshold detection only; use general2d or symmetric");
  std::vector<double> mus = parse_range(a.mu_range);
  std::sort(mus.begin(), mus.end());

  const int jobs = std::max(1, std::min<int>(a.jobs > 0 ? a.jobs : default_jobs(), static_cast<int>(mus.size())));
  std::vector<klt::GnsRecord> rows(mus.size());
  std::vector<std::exception_ptr> errors(mus.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < mus.size(); i = next++) {
      try {
        const klt::LambdaResult r = klt::capital_lambda(mus[i], params, m, mode, config);
        const klt::CylinderGrid& g = r.state.grid;
        rows[i] = {mus[i],  r.value, klt::symmetry_fraction(r.state), r.state.iterations, r.state.gradient_norm,
                   r.lambda_R, r.tolerance, klt::to_string(mode), g.s.n, g.m, g.s.s_min, g.s.s_max};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (a.format == "csv") {
    std::cout << klt::gns_record_csv_header();
    for (const auto& r : rows) std::cout << klt::gns_record_csv(r);
  } else {
    for (const auto& r : rows) std::cout << klt::gns_record_json(r) << "\n";
  }
  return ok;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(bool quick, const std::vector<int>& only) {
  klt::AcceptanceOptions options;
  options.quick = quick;
  options.only = only;
  int failures = 0;
  klt::run_acceptance(options, [&](const klt::CriterionResult& r) {
    std::cout << klt::format_criterion(r) << std::endl;
    if (!r.pass) ++failures;
  });
  std::cout << failures << " failed\n";
  return failures == 0 ? ok : acceptance_failure;
}

void add_manifold_options(CLI::App* cmd, ManifoldChoice& m) {
  auto* sphere = cmd->add_flag("--sphere", m.sphere, "M = S^{d-1}");
  cmd->add_option("--manifold", m.file, "spectral description of M (dim kappa / lambda multiplicity)")->excludes(sphere);
  cmd->add_option("--l-max", m.l_max, "harmonic degrees kept for spheres")->check(CLI::Range(1, 200));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keller-Lieb-Thirring constants, ground states and symmetry thresholds on cylinders"};
  app.require_subcommand(1);

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "closed-form constants for (d, q) and M");
  constants->add_option("--d", ca.d, "cylinder dimension")->required();
  constants->add_option("--q", ca.q, "potential exponent")->required();
  constants->add_option("--n", ca.n, "effective dimension (default 2q)");
  add_manifold_options(constants, ca.manifold);
  constants->add_option("--format", ca.format)->check(CLI::IsMember({"text", "json"}));

  EigenArgs ea;
  auto* eigen = app.add_subcommand("eigen", "ground state of -d_s^2 - V or of the cylinder operator");
  eigen->add_option("kind", ea.kind, "line | cylinder")->required()->check(CLI::IsMember({"line", "cylinder"}));
  auto* pot = eigen->add_option("--potential", ea.potential, "two-column `s value` file");
  auto* pot2 = eigen->add_option("--potential-2d", ea.potential_2d, "n m s_min s_max header + values (R x S^1)");
  auto* opt = eigen->add_option("--optimal-mu", ea.optimal_mu, "use V_{1,mu} with this norm");
  pot->excludes(pot2)->excludes(opt);
  pot2->excludes(opt);
  eigen->add_option("--q", ea.q, "exponent for --optimal-mu");
  eigen->add_option("--n", ea.n, "grid nodes for --optimal-mu")->check(CLI::Range(16, 10'000'000));
  eigen->add_option("--sphere-d", ea.sphere_d, "cylinder over S^{d-1}")->check(CLI::Range(2, 64));
  eigen->add_option("--manifold", ea.manifold_file, "spectral description of M");
  eigen->add_option("--l-max", ea.l_max, "highest mode examined (default automatic)");
  eigen->add_option("--modes-csv", ea.modes_csv, "write per-mode eigenvalues here");
  eigen->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json"}));

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "curvature interval and numerical bracket for mu_star");
  threshold->add_option("--d", ta.d)->required();
  threshold->add_option("--q", ta.q)->required();
  add_manifold_options(threshold, ta.manifold);
  threshold->add_option("--config", ta.config, "optimizer settings, name=value lines");
  threshold->add_option("--tol", ta.tol, "relative bracket width");
  threshold->add_option("--format", ta.format)->check(CLI::IsMember({"text", "json"}));

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Lambda(mu), Lambda_R(mu) and the symmetry fraction on a mu grid");
  sweep->add_option("--d", sa.d)->required();
  sweep->add_option("--q", sa.q)->required();
  sweep->add_option("--mu", sa.mu_range, "start:stop:count")->required();
  add_manifold_options(sweep, sa.manifold);
  sweep->add_option("--mode", sa.mode, "symmetric | general2d");
  sweep->add_option("--config", sa.config, "optimizer settings, name=value lines");
  sweep->add_option("--jobs", sa.jobs, "concurrent points (default KLT_JOBS or 1)")->check(CLI::Range(1, 1024));
  sweep->add_option("--format", sa.format)->check(CLI::IsMember({"json", "csv"}));

  bool quick = false;
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--quick", quick, "reduced grids for the optimizer criteria");
  verify->add_option("--only", only, "criterion ids")->delimiter(',')->check(CLI::Range(1, 11));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }

  try {
    if (*constants) return cmd_constants(ca);
    if (*eigen) return cmd_eigen(ea);
    if (*threshold) return cmd_threshold(ta);
    if (*sweep) return cmd_sweep(sa);
    if (*verify) return cmd_verify(quick, only);
  } catch (const klt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  } catch (const klt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io_failure;
  } catch (const klt::InconclusiveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& [x, y] : e.samples()) std::cerr << "  sample " << num(x) << " " << num(y) << "\n";
    return solver_failure;
  } catch (const klt::SolverError& e) {
    std::cerr << "error: " << e.what() << " (iterations " << e.iterations() << ", residual " << num(e.residual())
              << ")\n";
    return solver_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return solver_failure;
  }
  return ok;
}
