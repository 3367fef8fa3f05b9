#pragma once
// Plain-text inputs (potentials) and machine-readable outputs (CSV, JSON).

#include <string>
#include <vector>

#include "klt/cylinder.hpp"
#include "klt/line_solver.hpp"

namespace klt {

/// Two columns `s value` per line, '#' comments. The nodes must be uniform
/// within 1e-9 relative spacing; they become the interior nodes of the grid.
SampledPotential1D parse_potential_1d(const std::string& text, const std::string& name);
SampledPotential1D load_potential_1d(const std::string& path);

/// Header `n m s_min s_max`, then n*m values row-major (s outer).
CylinderPotential parse_potential_2d(const std::string& text, const std::string& name);
CylinderPotential load_potential_2d(const std::string& path);

std::string read_text_file(const std::string& path);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

/// Columns ell, lambda_ell, e_ell.
std::string mode_result_csv(const ModeResult& r);

struct GnsRecord {
  double mu;
  double lambda;
  double symmetry_fraction;
  int iterations;
  double residual;
  // provenance
  double lambda_R = 0.0;
  double tolerance = 0.0;
  std::string mode;
  int n_s = 0;
  int m = 1;
  double s_min = 0.0;
  double s_max = 0.0;
};

/// One JSON object on one line with `schema: 1`.
std::string gns_record_json(const GnsRecord& r);
/// Columns mu, lambda, lambda_R, symmetry_fraction, iterations, residual,
/// tolerance, mode, n_s, m, s_min, s_max.
std::string gns_record_csv_header();
std::string gns_record_csv(const GnsRecord& r);

}  // namespace klt
