#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tw/measure.hpp"

namespace tw {

/// FNV-1a digest of the canonical config text, embedded in every report so
/// regression tests are content-addressed.
uint64_t content_digest(const std::string& text);

struct InvariantVerdict {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double bound = 0.0;
};

class Report {
 public:
  Report(std::string command, const nlohmann::json& config);

  void add_result(const std::string& key, const nlohmann::json& value);
  void add_invariant(const std::string& name, bool pass, double value, double bound);
  void add_table(const std::string& name, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

  bool all_invariants_pass() const;
  std::string to_json_text() const;
  void write(const std::string& out_dir, bool with_csv) const;

 private:
  nlohmann::json doc_;
  std::vector<InvariantVerdict> verdicts_;
};

/// Builtin weight pairs used by the CLI and the test suites.
struct WeightPair {
  Weight sigma;
  Weight w;
  std::string name;
};

/// Known names: cantor:<depth>, cantor-prime:<depth>, lebesgue,
/// mw-failure, mw-tail, log-compact, tail-compact.
WeightPair builtin_pair(const std::string& name);

}  // namespace tw
