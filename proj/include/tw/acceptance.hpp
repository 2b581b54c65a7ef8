#pragma once

#include <string>
#include <vector>

namespace tw {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance battery; deterministic given the seed.
std::vector<CriterionResult> run_acceptance(uint64_t seed = 20240901, bool verbose = false);

}  // namespace tw
