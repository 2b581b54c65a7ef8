#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tw/measure.hpp"
#include "tw/rational.hpp"

namespace tw {

enum class GridBase : int { Dyadic = 2, Triadic = 3 };

/// A shifted grid: level-n intervals have length base^n and are translated
/// by the dyadic shift built from the bits omega (finite support window).
/// Bit omega[m] contributes 2^m to every interval of length > 2^m, so grids
/// stay nested across levels.
struct GridSpec {
  GridBase base = GridBase::Dyadic;
  int min_level = -8;
  int max_level = 0;
  std::map<int, int> omega;  // level -> bit; dyadic grids only
  Interval window{0.0, 1.0};
  std::size_t max_intervals = 1u << 22;

  Rat shift(int level) const {
    if (base == GridBase::Triadic) return Rat(0);
    Rat s(0);
    for (const auto& [m, bit] : omega)
      if (bit && m < level) s = s + pow_rat(2, m);
    return s;
  }
};

struct DyadicInterval {
  int level = 0;
  long long index = 0;
  const GridSpec* spec = nullptr;

  Rat left_exact() const {
    return pow_rat(static_cast<int>(spec->base), level) * Rat(index) + spec->shift(level);
  }
  Rat right_exact() const {
    return pow_rat(static_cast<int>(spec->base), level) * Rat(index + 1) + spec->shift(level);
  }
  double lo() const { return left_exact().to_double(); }
  double hi() const { return right_exact().to_double(); }
  double length() const { return pow_rat(static_cast<int>(spec->base), level).to_double(); }
  Interval interval() const { return Interval(left_exact(), right_exact()); }

  DyadicInterval parent() const;
  std::vector<DyadicInterval> children() const;
  bool contains(const DyadicInterval& other) const;
  bool contains_point(double x) const;
  /// The child of *this containing other (other strictly finer).
  DyadicInterval child_toward(const DyadicInterval& other) const;

  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.level == b.level && a.index == b.index && a.spec == b.spec;
  }
  friend bool operator<(const DyadicInterval& a, const DyadicInterval& b) {
    if (a.level != b.level) return a.level > b.level;  // coarse first
    return a.index < b.index;
  }
};

struct GoodnessParams {
  double epsilon = 0.25;  // (0, 1/4] is the operative range downstream
  int r = 4;

  GoodnessParams() = default;
  GoodnessParams(double eps, int rr) : epsilon(eps), r(rr) {
    require(eps > 0.0 && eps < 1.0, Err::PreconditionViolated, "epsilon must lie in (0, 1)");
    require(rr >= 1, Err::PreconditionViolated, "r must be >= 1");
  }
};

enum class Goodness { Good, Bad, Undetermined };

struct Grid {
  std::shared_ptr<const GridSpec> spec;  // stable address; intervals point here
  // levels[k] holds the tiling of the window at level max_level - k
  std::vector<std::vector<DyadicInterval>> levels;

  const std::vector<DyadicInterval>& at_level(int level) const {
    return levels.at(static_cast<std::size_t>(spec->max_level - level));
  }
  std::vector<DyadicInterval> all() const;
};

Grid build_grid(GridSpec spec);

/// (eps,r)-goodness of I with respect to every grid interval J in the window
/// with |J| >= 2^{r-1}|I|: both children of I must be at distance at least
/// |I|^eps |J|^{1-eps} from the level-|J| endpoint lattice.
Goodness classify_good(const DyadicInterval& I, const GoodnessParams& params);

struct BadProbEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

/// Monte Carlo estimate of P(fixed-length interval is (eps,r)-bad) over
/// independent shift draws; deterministic given seed. tail_levels bounds the
/// coarse scales checked (failure beyond it has probability < 2^{-eps*tail}).
BadProbEstimate estimate_bad_probability(const GoodnessParams& params, int trials, uint64_t seed,
                                         int tail_levels = 64);

/// t-fold minimal enclosing element of F (pi_F^t); none if it leaves the window.
std::optional<DyadicInterval> parent_in_collection(const DyadicInterval& I,
                                                   std::span<const DyadicInterval> F, int t);

/// True iff no atom of w sits exactly on a grid endpoint (exact rational test).
bool admissible(const Grid& grid, const Weight& w);

}  // namespace tw
