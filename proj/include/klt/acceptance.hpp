#pragma once
// The acceptance criteria as runnable checks. Each criterion reports a
// pass/fail verdict, a one-line detail with the measured quantities, and its
// runtime, which counts against the criterion's time budget.

#include <functional>
#include <string>
#include <vector>

namespace klt {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
  double budget_seconds;
};

struct AcceptanceOptions {
  bool quick = false;      // reduced grids for the optimizer-based criteria
  std::vector<int> only;   // empty: all criteria
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// `[PASS] 3 scaling covariance (1.2s): detail`
std::string format_criterion(const CriterionResult& r);

}  // namespace klt
