#include <cstdio>
#include "tw/acceptance.hpp"

int main() {
  auto results = tw::run_acceptance(20240901, false);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] criterion %2d: %s (%.2fs)\n      %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
