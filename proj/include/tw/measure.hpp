#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tw/errors.hpp"
#include "tw/rational.hpp"

namespace tw {

using Func = std::function<double(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  std::optional<Rat> lo_exact;
  std::optional<Rat> hi_exact;

  Interval() = default;
  Interval(double a, double b) : lo(a), hi(b) {
    require(a < b, Err::PreconditionViolated, "interval needs lo < hi");
  }
  Interval(Rat a, Rat b) : lo(a.to_double()), hi(b.to_double()), lo_exact(a), hi_exact(b) {
    require(a < b, Err::PreconditionViolated, "interval needs lo < hi");
  }

  double length() const {
    // exact endpoints avoid the cancellation of hi - lo for short intervals
    // anchored at O(1) positions
    if (lo_exact && hi_exact) return (*hi_exact - *lo_exact).to_double();
    return hi - lo;
  }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x, bool closed_left = true, bool closed_right = true) const {
    if (x < lo || x > hi) return false;
    if (x == lo) return closed_left;
    if (x == hi) return closed_right;
    return true;
  }
  double dist(double x) const {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
  }
  /// Concentric triple 3I.
  Interval tripled() const {
    Interval t(lo - length(), hi + length());
    if (lo_exact && hi_exact) {
      Rat len = *hi_exact - *lo_exact;
      t.lo_exact = *lo_exact - len;
      t.hi_exact = *hi_exact + len;
    }
    return t;
  }
  bool overlaps_interior(const Interval& o) const { return lo < o.hi && o.lo < hi; }
};

enum class PieceKind {
  Poly,        // polynomial density, degree <= 3, on a bounded interval
  TailRight,   // polynomial density on [lo, +inf)
  TailLeft,    // polynomial density on (-inf, hi]
  XOverLogSq,  // tabulated special density x / (ln x)^2 on a bounded subinterval of (0,1)
};

struct DensityPiece {
  Interval iv;                       // for tails, the finite endpoint is the relevant one
  std::array<double, 4> coef{};      // c0 + c1 x + c2 x^2 + c3 x^3
  PieceKind kind = PieceKind::Poly;

  double eval(double x) const;
  int degree() const {
    for (int d = 3; d >= 1; --d)
      if (coef[d] != 0.0) return d;
    return 0;
  }
};

struct Atom {
  double pos = 0.0;
  double mass = 0.0;
  std::optional<Rat> pos_exact;
};

struct QuadratureBudget {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 200000;

  QuadratureBudget() = default;
  QuadratureBudget(double at, int maxsub) : abs_tol(at), max_subdivisions(maxsub) {
    require(at > 0, Err::PreconditionViolated, "abs_tol must be positive");
    require(maxsub > 0, Err::PreconditionViolated, "max_subdivisions must be positive");
  }
};

struct Moments {
  double mean = 0.0;
  double centered_second = 0.0;  // unnormalized: ∫_I (x - mean)^2 dw
};

/// A weight: finitely many atoms plus piecewise-polynomial (or tabulated)
/// density pieces with pairwise disjoint interiors. Immutable after
/// construction; all operations are const.
class Weight {
 public:
  Weight() = default;
  Weight(std::vector<Atom> atoms, std::vector<DensityPiece> pieces, std::string label = "");

  static Weight point_mass(double pos, double mass, std::optional<Rat> exact = std::nullopt);
  static Weight from_atoms(std::vector<Atom> atoms, std::string label = "");
  static Weight lebesgue(double a, double b, std::string label = "");
  static Weight density(Interval iv, std::array<double, 4> coef, std::string label = "");

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  const std::string& label() const { return label_; }
  bool purely_atomic() const { return pieces_.empty(); }
  bool has_unbounded_support() const;

  double mass(const Interval& I, bool closed_left = true, bool closed_right = true) const;
  double total_atom_mass() const;

  /// ∫_I f dw. Atoms summed exactly; density pieces via adaptive quadrature.
  double integrate(const Func& f, const Interval& I, const QuadratureBudget& budget = {}) const;

  Weight restrict_to(const std::vector<Interval>& keep, bool closed_left = true,
                     bool closed_right = true) const;
  Weight restrict_complement(const Interval& hole) const;  // w on R minus the open hole

  Moments first_moment(const Interval& I) const;

  /// Support bounds (atoms and piece endpoints); tails make it infinite.
  Interval support_bounds() const;

  std::string to_json() const;
  static Weight from_json(const std::string& text);

  Weight relabeled(std::string label) const {
    Weight w = *this;
    w.label_ = std::move(label);
    return w;
  }

 private:
  void validate() const;

  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
  std::string label_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss–Kronrod (G7,K15) panel integration.
QuadResult adaptive_quadrature(const Func& f, double a, double b, const QuadratureBudget& budget);

/// Exact ∫_u^v p(x) dx for the cubic with coefficients coef.
double poly_integral(const std::array<double, 4>& coef, double u, double v);

/// Exact ∫_u^v x^k p(x) dx, k in {1,2}.
double poly_moment_integral(const std::array<double, 4>& coef, int k, double u, double v);

/// Exact ∫_u^v p(x) * A/(A + s(x))^2 dx where s(x) = (c - x) for left zones
/// and (x - c) for right zones (sign = -1 / +1), A > 0, and s > 0 on [u,v].
double poly_against_poisson_kernel(const std::array<double, 4>& coef, double u, double v, double A,
                                   double c, int sign);

/// Exact ∫_u^v p(y) / (y - x) dy for x outside (u,v).
double poly_against_cauchy_kernel(const std::array<double, 4>& coef, double u, double v, double x);

}  // namespace tw
