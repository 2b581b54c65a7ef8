#include "tw/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tw/rng.hpp"

namespace tw {

namespace {
long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long rat_floor(const Rat& r) {
  return floor_div(r.num, r.den);
}

int omega_bit(const GridSpec& s, int level) {
  auto it = s.omega.find(level);
  return it == s.omega.end() ? 0 : (it->second ? 1 : 0);
}
}  // namespace

DyadicInterval DyadicInterval::parent() const {
  int b = static_cast<int>(spec->base);
  long long shifted = b == 2 ? index - omega_bit(*spec, level) : index;
  return {level + 1, floor_div(shifted, b), spec};
}

std::vector<DyadicInterval> DyadicInterval::children() const {
  int b = static_cast<int>(spec->base);
  std::vector<DyadicInterval> out;
  long long base_index = b * index + (b == 2 ? omega_bit(*spec, level - 1) : 0);
  for (int j = 0; j < b; ++j) out.push_back({level - 1, base_index + j, spec});
  return out;
}

bool DyadicInterval::contains(const DyadicInterval& other) const {
  require(other.spec == spec, Err::MixedGrids, "intervals from different grids");
  if (other.level > level) return false;
  DyadicInterval cur = other;
  while (cur.level < level) cur = cur.parent();
  return cur.index == index;
}

bool DyadicInterval::contains_point(double x) const { return lo() <= x && x < hi(); }

DyadicInterval DyadicInterval::child_toward(const DyadicInterval& other) const {
  require(contains(other) && other.level < level, Err::PreconditionViolated,
          "child_toward needs a strictly finer contained interval");
  DyadicInterval cur = other;
  while (cur.level < level - 1) cur = cur.parent();
  return cur;
}

std::vector<DyadicInterval> Grid::all() const {
  std::vector<DyadicInterval> out;
  for (const auto& lvl : levels) out.insert(out.end(), lvl.begin(), lvl.end());
  return out;
}

Grid build_grid(GridSpec spec_in) {
  require(spec_in.min_level <= spec_in.max_level, Err::PreconditionViolated,
          "min_level must not exceed max_level");
  Grid g;
  g.spec = std::make_shared<const GridSpec>(std::move(spec_in));
  const GridSpec& spec = *g.spec;
  const GridSpec* sp = g.spec.get();
  std::size_t count = 0;
  for (int level = spec.max_level; level >= spec.min_level; --level) {
    Rat len = pow_rat(static_cast<int>(spec.base), level);
    Rat s = spec.shift(level);
    // index of the grid interval [k*len + s, (k+1)*len + s) containing x
    auto idx_of = [&](double x) {
      // conservative double-based bracket, then correct with exact compare
      double approx = (x - s.to_double()) / len.to_double();
      long long k = static_cast<long long>(std::floor(approx));
      for (int fix = 0; fix < 4; ++fix) {
        Rat left = len * Rat(k) + s;
        Rat right = len * Rat(k + 1) + s;
        if (left.to_double() > x)
          --k;
        else if (right.to_double() <= x)
          ++k;
        else
          break;
      }
      return k;
    };
    long long klo = idx_of(spec.window.lo);
    long long khi = idx_of(std::nextafter(spec.window.hi, -1e300));
    std::vector<DyadicInterval> row;
    for (long long k = klo; k <= khi; ++k) {
      row.push_back({level, k, sp});
      if (++count > spec.max_intervals)
        fail(Err::WindowTooLarge, "grid interval count exceeds max_intervals");
    }
    g.levels.push_back(std::move(row));
  }
  return g;
}

Goodness classify_good(const DyadicInterval& I, const GoodnessParams& params) {
  const GridSpec& spec = *I.spec;
  require(spec.base == GridBase::Dyadic, Err::PreconditionViolated,
          "goodness is defined for dyadic grids");
  int first_level = I.level + params.r - 1;
  if (first_level > spec.max_level) fail(Err::UndeterminedAtBoundary, "window lacks the coarse levels needed for classification");
  auto kids = I.children();
  for (int lvl = first_level; lvl <= spec.max_level; ++lvl) {
    Rat len = pow_rat(2, lvl);
    Rat s = spec.shift(lvl);
    double threshold = std::exp2(I.level * params.epsilon + lvl * (1.0 - params.epsilon));
    for (const auto& child : kids) {
      Rat a = child.left_exact(), b = child.right_exact();
      // nearest lattice points p = m*len + s around [a, b]
      long long m0 = rat_floor((a - s) * Rat(len.den, len.num));
      double dist = 1e300;
      for (long long m = m0 - 1; m <= m0 + 2; ++m) {
        Rat p = len * Rat(m) + s;
        double d;
        if (p < a)
          d = (a - p).to_double();
        else if (b < p)
          d = (p - b).to_double();
        else
          d = 0.0;
        dist = std::min(dist, d);
      }
      if (dist < threshold) return Goodness::Bad;
    }
  }
  return Goodness::Good;
}

BadProbEstimate estimate_bad_probability(const GoodnessParams& params, int trials, uint64_t seed,
                                         int tail_levels) {
  require(trials >= 100, Err::PreconditionViolated, "need at least 100 trials");
  int bad = 0;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<uint64_t>(t));
    // Reference interval [0,1) at level 0; only bits at levels 0..T-1 move
    // it relative to coarser lattices. Work in half-units so children are
    // integer intervals [0,1], [1,2].
    bool is_bad = false;
    __int128 srel = 0;  // sum 2^m * bit over m < current level
    std::vector<int> bits(static_cast<std::size_t>(tail_levels), 0);
    for (int m = 0; m < tail_levels; ++m) bits[static_cast<std::size_t>(m)] = rng.bit();
    for (int m = 0; m < params.r - 1; ++m) srel += ((__int128)bits[m]) << m;
    for (int lvl = params.r - 1; lvl <= tail_levels && !is_bad; ++lvl) {
      if (lvl > params.r - 1) srel += ((__int128)bits[lvl - 1]) << (lvl - 1);
      __int128 spacing = ((__int128)1) << (lvl + 1);  // half-units
      __int128 offset = (2 * srel) % spacing;
      double threshold = 2.0 * std::exp2(lvl * (1.0 - params.epsilon));
      for (int child = 0; child < 2 && !is_bad; ++child) {
        __int128 a = child, b = child + 1;
        // candidate lattice points: offset - spacing, offset, offset + spacing...
        for (__int128 p = offset - spacing; p <= offset + spacing; p += spacing) {
          __int128 d = p < a ? a - p : (p > b ? p - b : 0);
          if (static_cast<double>(d) < threshold) {
            is_bad = true;
            break;
          }
        }
      }
    }
    if (is_bad) ++bad;
  }
  double p = static_cast<double>(bad) / trials;
  double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / trials) / trials);
  return {p, se, trials};
}

std::optional<DyadicInterval> parent_in_collection(const DyadicInterval& I,
                                                   std::span<const DyadicInterval> F, int t) {
  require(t >= 1, Err::PreconditionViolated, "t must be >= 1");
  for (const auto& f : F)
    require(f.spec == I.spec, Err::MixedGrids, "collection spans multiple grids");
  auto minimal_containing = [&](const DyadicInterval& J, bool strict) -> std::optional<DyadicInterval> {
    std::optional<DyadicInterval> best;
    for (const auto& f : F) {
      if (strict && f.level <= J.level) continue;
      if (!f.contains(J)) continue;
      if (strict && f == J) continue;
      if (!best || best->level > f.level) best = f;
    }
    return best;
  };
  auto cur = minimal_containing(I, false);
  for (int k = 2; k <= t && cur; ++k) cur = minimal_containing(*cur, true);
  return cur;
}

bool admissible(const Grid& grid, const Weight& w) {
  const GridSpec& spec = *grid.spec;
  Rat len = pow_rat(static_cast<int>(spec.base), spec.min_level);
  Rat s = spec.shift(spec.min_level);
  for (const auto& atom : w.atoms()) {
    double approx = (atom.pos - s.to_double()) / len.to_double();
    long long k0 = static_cast<long long>(std::llround(approx));
    for (long long k = k0 - 1; k <= k0 + 1; ++k) {
      Rat p = len * Rat(k) + s;
      if (p.to_double() < spec.window.lo - len.to_double() ||
          p.to_double() > spec.window.hi + len.to_double())
        continue;
      bool hit = atom.pos_exact ? (*atom.pos_exact == p) : rat_equals_double(p, atom.pos);
      if (hit) return false;
    }
  }
  return true;
}

}  // namespace tw
