#pragma once

// The desk-scale acceptance suite: ten numbered checks, each with pinned tolerances.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace tessella {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  /// Largest size for the 81-tile minimal generator census (criterion 2); 4 is required,
  /// 5 and 6 are extended runs.
  int all_tiles_max_size = 5;
  /// Criteria to run; empty means all.
  std::vector<int> only;
  /// Called with each result as soon as it is known.
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "criterion 3 PASS G1 and G2 generator classes: G1 5/5, G2 40/40 (12.3 s)"
std::string format_result(const CriterionResult& r);

}  // namespace tessella
