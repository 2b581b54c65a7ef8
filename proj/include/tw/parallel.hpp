#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tw {

inline int worker_count() {
  if (const char* env = std::getenv("TW_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Deterministic parallel loop: body(i) must only write to slot i of
/// preallocated output. Reduction order is left to the caller.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace tw
