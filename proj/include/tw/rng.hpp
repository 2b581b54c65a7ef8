#pragma once

#include <cmath>
#include <cstdint>

namespace tw {

/// Counter-based splittable RNG: each (seed, stream) pair is an independent
/// stateless sequence, so parallel Monte Carlo trials are bitwise
/// reproducible regardless of scheduling.
struct CounterRng {
  uint64_t key;
  uint64_t ctr = 0;

  CounterRng(uint64_t seed, uint64_t stream) : key(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t next() { return mix(key + 0x9e3779b97f4a7c15ull * ++ctr); }

  /// Uniform in [0,1).
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  int bit() { return static_cast<int>(next() >> 63); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  double log_uniform(double a, double b) { return a * std::exp(u01() * std::log(b / a)); }
};

}  // namespace tw
