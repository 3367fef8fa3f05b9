#include "klt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "klt/errors.hpp"

namespace klt {
namespace {

std::string strip_comment(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read error on " + path);
  return buf.str();
}

SampledPotential1D parse_potential_1d(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> s;
  std::vector<double> v;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    double a = 0.0;
    double b = 0.0;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra))
      throw IoError(name + ":" + std::to_string(line_no) + ": expected two numbers `s value`");
    if (!std::isfinite(a) || !std::isfinite(b)) throw IoError(name + ":" + std::to_string(line_no) + ": non-finite value");
    s.push_back(a);
    v.push_back(b);
  }
  if (s.size() < 16) throw IoError(name + ": need at least 16 samples");
  const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
  if (!(h > 0.0)) throw IoError(name + ": nodes must increase");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::fabs((s[i] - s[i - 1]) - h) > 1e-9 * h) throw IoError(name + ": nodes are not uniformly spaced");
  SampledPotential1D out;
  out.grid = make_grid(s.front() - h, s.back() + h, static_cast<int>(s.size()));
  out.values = std::move(v);
  return out;
}

SampledPotential1D load_potential_1d(const std::string& path) { return parse_potential_1d(read_text_file(path), path); }

CylinderPotential parse_potential_2d(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  long n = 0;
  long m = 0;
  double s_min = 0.0;
  double s_max = 0.0;
  bool header = false;
  std::vector<double> values;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    if (!header) {
      std::string extra;
      if (!(ls >> n >> m >> s_min >> s_max) || (ls >> extra))
        throw IoError(name + ":" + std::to_string(line_no) + ": expected header `n m s_min s_max`");
      header = true;
      continue;
    }
    std::string tok;
    while (ls >> tok) {
      double x = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(x))
        throw IoError(name + ":" + std::to_string(line_no) + ": bad value '" + tok + "'");
      values.push_back(x);
    }
  }
  if (!header) throw IoError(name + ": missing header");
  if (n < 16 || m < 3 || n * m > 50'000'000) throw IoError(name + ": unsupported grid size");
  if (static_cast<long>(values.size()) != n * m)
    throw IoError(name + ": expected " + std::to_string(n * m) + " values, found " + std::to_string(values.size()));
  if (!(s_min < s_max)) throw IoError(name + ": need s_min < s_max");
  return CylinderPotential::general2d(make_grid(s_min, s_max, static_cast<int>(n)), static_cast<int>(m),
                                      std::move(values));
}

CylinderPotential load_potential_2d(const std::string& path) { return parse_potential_2d(read_text_file(path), path); }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::string mode_result_csv(const ModeResult& r) {
  std::string out = csv_row({"ell", "lambda_ell", "e_ell"});
  for (const auto& m : r.modes) out += csv_row({std::to_string(m.ell), format_double(m.lambda_ell), format_double(m.e_ell)});
  return out;
}

std::string gns_record_json(const GnsRecord& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["mu"] = r.mu;
  j["lambda"] = r.lambda;
  j["symmetry_fraction"] = r.symmetry_fraction;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["lambda_R"] = r.lambda_R;
  j["tolerance"] = r.tolerance;
  j["mode"] = r.mode;
  j["grid"] = {{"n_s", r.n_s}, {"m", r.m}, {"s_min", r.s_min}, {"s_max", r.s_max}};
  return j.dump();
}

std::string gns_record_csv_header() {
  return csv_row({"mu", "lambda", "lambda_R", "symmetry_fraction", "iterations", "residual", "tolerance", "mode", "n_s",
                  "m", "s_min", "s_max"});
}

std::string gns_record_csv(const GnsRecord& r) {
  return csv_row({format_double(r.mu), format_double(r.lambda), format_double(r.lambda_R),
                  format_double(r.symmetry_fraction), std::to_string(r.iterations), format_double(r.residual),
                  format_double(r.tolerance), r.mode, std::to_string(r.n_s), std::to_string(r.m),
                  format_double(r.s_min), format_double(r.s_max)});
}

}  // namespace klt
