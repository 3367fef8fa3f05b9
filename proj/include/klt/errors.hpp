#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace klt {

// Parameter or input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be read or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver stopped before meeting its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

// A bracketing search whose detector did not behave monotonically, or whose
// bracket could not be established. Carries the (x, value) samples seen.
class InconclusiveError : public std::runtime_error {
 public:
  InconclusiveError(const std::string& what, std::vector<std::pair<double, double>> samples)
      : std::runtime_error(what), samples_(std::move(samples)) {}
  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

 private:
  std::vector<std::pair<double, double>> samples_;
};

}  // namespace klt
