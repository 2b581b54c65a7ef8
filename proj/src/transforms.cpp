#include "tw/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace tw {

double smooth_kernel(double y, const TruncationSpec& spec) {
  if (y == 0.0) return 0.0;
  double a = std::abs(y), s = y > 0 ? 1.0 : -1.0;
  double v;
  if (a < spec.alpha)
    v = -a / (spec.alpha * spec.alpha) + 2.0 / spec.alpha;
  else if (a <= spec.beta)
    v = 1.0 / a;
  else if (a < 2.0 * spec.beta)
    v = -a / (spec.beta * spec.beta) + 2.0 / spec.beta;
  else
    v = 0.0;
  return s * v;
}

double hard_kernel(double y, const TruncationSpec& spec) {
  double a = std::abs(y);
  if (a <= spec.alpha || a >= spec.beta) return 0.0;
  return 1.0 / y;
}

double truncation_kernel(double y, const TruncationSpec& spec) {
  return spec.mode == TruncMode::Hard ? hard_kernel(y, spec) : smooth_kernel(y, spec);
}

namespace {

// Closed-form ∫ p(y) * k(y - x) dy over [u,v] for the hard kernel, assuming
// [u,v] lies inside one of the active bands (no cut crossing, x outside).
double poly_hard_band(const std::array<double, 4>& coef, double u, double v, double x) {
  return poly_against_cauchy_kernel(coef, u, v, x);
}

// ∫ p(y) * (c1*(y-x) + c0) dy over [u,v] (linear kernel branches).
double poly_linear_band(const std::array<double, 4>& coef, double u, double v, double x, double c1,
                        double c0) {
  // expand (c1*(y-x)+c0) * p(y) = (c1*y + (c0 - c1*x)) * p(y)
  double b0 = c0 - c1 * x;
  std::array<double, 4> q = coef;
  double lin = 0.0;
  lin += b0 * poly_integral(q, u, v);
  lin += c1 * poly_moment_integral(q, 1, u, v);
  return lin;
}

// Integrate a polynomial piece against the truncation kernel by splitting at
// the kernel's knots; each band is exact.
double piece_against_kernel(const DensityPiece& p, const Interval& overlap, double x,
                            const TruncationSpec& spec, const QuadratureBudget& budget) {
  double a = spec.alpha, b = spec.beta;
  std::vector<double> knots = {overlap.lo, overlap.hi};
  for (double k : {x - 2 * b, x - b, x - a, x, x + a, x + b, x + 2 * b})
    if (k > overlap.lo && k < overlap.hi) knots.push_back(k);
  std::sort(knots.begin(), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double u = knots[i], v = knots[i + 1];
    if (v <= u) continue;
    double mid = 0.5 * (u + v);
    double d = std::abs(mid - x);
    if (p.kind == PieceKind::XOverLogSq) {
      auto f = [&](double y) { return p.eval(y) * truncation_kernel(y - x, spec); };
      if (truncation_kernel(mid - x, spec) != 0.0)
        total += adaptive_quadrature(f, u, v, budget).value;
      continue;
    }
    if (spec.mode == TruncMode::Hard) {
      if (d <= a || d >= b) continue;  // kernel vanishes on this band
      total += poly_hard_band(p.coef, u, v, x);
    } else {
      int s = mid > x ? 1 : -1;
      if (d >= 2 * b) continue;
      // odd kernel: K(u) = -u/a^2 + s*2/a on the inner cap, -u/b^2 + s*2/b outer
      if (d < a)
        total += poly_linear_band(p.coef, u, v, x, -1.0 / (a * a), s * 2.0 / a);
      else if (d <= b)
        total += poly_hard_band(p.coef, u, v, x);
      else
        total += poly_linear_band(p.coef, u, v, x, -1.0 / (b * b), s * 2.0 / b);
    }
  }
  return total;
}

}  // namespace

double truncated_hilbert(const Weight& w, const Func& f, double x, const TruncationSpec& spec,
                         const QuadratureBudget& budget) {
  double total = 0.0;
  for (const auto& atom : w.atoms()) {
    double d = std::abs(atom.pos - x);
    if (spec.mode == TruncMode::Hard)
      require(d != spec.alpha && d != spec.beta, Err::AtomOnCut,
              "atom sits exactly on a truncation cut");
    double k = truncation_kernel(atom.pos - x, spec);
    if (k == 0.0) continue;
    double fv = f ? f(atom.pos) : 1.0;
    require(std::isfinite(fv), Err::SingularEvaluation, "f not finite at atom");
    total += fv * atom.mass * k;
  }
  for (const auto& p : w.pieces()) {
    // active window of the kernel around x
    Interval act;
    act.lo = x - 2 * spec.beta;
    act.hi = x + 2 * spec.beta;
    double plo = p.kind == PieceKind::TailLeft ? act.lo : std::max(p.iv.lo, act.lo);
    double phi = p.kind == PieceKind::TailRight ? act.hi : std::min(p.iv.hi, act.hi);
    if (plo >= phi) continue;
    Interval o;
    o.lo = plo;
    o.hi = phi;
    if (f) {
      auto g = [&](double y) { return f(y) * p.eval(y) * truncation_kernel(y - x, spec); };
      // split at kernel knots to keep panels smooth
      std::vector<double> knots = {o.lo, o.hi};
      for (double k : {x - 2 * spec.beta, x - spec.beta, x - spec.alpha, x, x + spec.alpha,
                       x + spec.beta, x + 2 * spec.beta})
        if (k > o.lo && k < o.hi) knots.push_back(k);
      std::sort(knots.begin(), knots.end());
      for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > knots[i])
          total += adaptive_quadrature(g, knots[i], knots[i + 1], budget).value;
    } else {
      total += piece_against_kernel(p, o, x, spec, budget);
    }
  }
  return total;
}

double averaging_op(const Weight& w, const Func& f, double x, double alpha,
                    const QuadratureBudget& budget) {
  require(alpha > 0, Err::PreconditionViolated, "alpha must be positive");
  Interval I(x - 2 * alpha, x + 2 * alpha);
  Func one = [](double) { return 1.0; };
  return w.integrate(f ? f : one, I, budget) / (4.0 * alpha);
}

double poisson_integral(const Weight& w, const Interval& I, const QuadratureBudget& budget) {
  const double h = I.length();
  double total = 0.0;
  for (const auto& atom : w.atoms()) {
    double s = h + I.dist(atom.pos);
    total += atom.mass * h / (s * s);
  }
  for (const auto& p : w.pieces()) {
    if (p.kind == PieceKind::TailRight || p.kind == PieceKind::TailLeft) {
      require(p.degree() == 0, Err::DivergentTail,
              "poisson integral of a growing tail density diverges");
      if (p.kind == PieceKind::TailRight) {
        double a = p.iv.lo;
        // interior/left portions up to max(a, I.hi), then the closed-form tail
        double start = std::max(a, I.hi);
        if (a < I.hi) {
          double u = std::max(a, I.lo);
          if (a < I.lo) total += poly_against_poisson_kernel(p.coef, a, I.lo, h, I.lo, -1);
          if (u < I.hi) total += p.coef[0] * (I.hi - u) / h;
        }
        total += p.coef[0] * h / (h + (start - I.hi));
      } else {
        double b = p.iv.hi;
        double start = std::min(b, I.lo);
        if (b > I.lo) {
          double v = std::min(b, I.hi);
          if (b > I.hi) total += poly_against_poisson_kernel(p.coef, I.hi, b, h, I.hi, +1);
          if (v > I.lo) total += p.coef[0] * (v - I.lo) / h;
        }
        total += p.coef[0] * h / (h + (I.lo - start));
      }
      continue;
    }
    double plo = p.iv.lo, phi = p.iv.hi;
    if (p.kind == PieceKind::XOverLogSq) {
      auto f = [&](double y) {
        double s = h + I.dist(y);
        return p.eval(y) * h / (s * s);
      };
      std::vector<double> knots = {plo, phi};
      for (double k : {I.lo, I.hi})
        if (k > plo && k < phi) knots.push_back(k);
      std::sort(knots.begin(), knots.end());
      for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > knots[i])
          total += adaptive_quadrature(f, knots[i], knots[i + 1], budget).value;
      continue;
    }
    // polynomial piece: exact in three zones
    double u = plo, v = phi;
    if (u < I.lo) total += poly_against_poisson_kernel(p.coef, u, std::min(v, I.lo), h, I.lo, -1);
    double mu = std::max(u, I.lo), mv = std::min(v, I.hi);
    if (mu < mv) total += poly_integral(p.coef, mu, mv) / h;
    if (v > I.hi) total += poly_against_poisson_kernel(p.coef, std::max(u, I.hi), v, h, I.hi, +1);
  }
  return total;
}

double poisson_extension(const Weight& w, const Func& h, double x, double t,
                         const QuadratureBudget& budget) {
  require(t > 0, Err::PreconditionViolated, "t must be positive");
  double total = 0.0;
  for (const auto& atom : w.atoms()) {
    double s = t + std::abs(x - atom.pos);
    double hv = h ? h(atom.pos) : 1.0;
    require(std::isfinite(hv), Err::SingularEvaluation, "h not finite at atom");
    total += hv * atom.mass * t / (s * s);
  }
  for (const auto& p : w.pieces()) {
    if (p.kind == PieceKind::TailRight || p.kind == PieceKind::TailLeft) {
      require(p.degree() == 0, Err::DivergentTail, "poisson extension of growing tail diverges");
      if (h) {
        // quadrature out to where the kernel tail is negligible
        double reach = t * 1e9;
        double u = p.kind == PieceKind::TailRight ? p.iv.lo : x - reach;
        double v = p.kind == PieceKind::TailRight ? x + reach : p.iv.hi;
        auto f = [&](double y) {
          double s = t + std::abs(x - y);
          return h(y) * p.eval(y) * t / (s * s);
        };
        std::vector<double> knots = {u, x, v};
        std::sort(knots.begin(), knots.end());
        for (std::size_t i = 0; i + 1 < knots.size(); ++i)
          if (knots[i + 1] > knots[i])
            total += adaptive_quadrature(f, knots[i], knots[i + 1], budget).value;
        continue;
      }
      if (p.kind == PieceKind::TailRight) {
        double a = p.iv.lo;
        // ∫_a^∞ t/(t+|x-y|)^2 dy: 2 - t/(t+x-a) when a < x, else t/(t+a-x)
        total += p.coef[0] * (a < x ? 2.0 - t / (t + (x - a)) : t / (t + (a - x)));
      } else {
        double b = p.iv.hi;
        total += p.coef[0] * (b > x ? 2.0 - t / (t + (b - x)) : t / (t + (x - b)));
      }
      continue;
    }
    double u = p.iv.lo, v = p.iv.hi;
    if (p.kind == PieceKind::XOverLogSq || h) {
      auto f = [&](double y) {
        double s = t + std::abs(x - y);
        double hv = h ? h(y) : 1.0;
        return hv * p.eval(y) * t / (s * s);
      };
      std::vector<double> knots = {u, v};
      if (x > u && x < v) knots.push_back(x);
      std::sort(knots.begin(), knots.end());
      for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > knots[i])
          total += adaptive_quadrature(f, knots[i], knots[i + 1], budget).value;
      continue;
    }
    // exact: kernel t/(t + |x-y|)^2 in two zones around x
    if (u < x) total += poly_against_poisson_kernel(p.coef, u, std::min(v, x), t, x, -1);
    if (v > x) total += poly_against_poisson_kernel(p.coef, std::max(u, x), v, t, x, +1);
  }
  return total;
}

double dual_poisson(const UpperHalfPlaneMeasure& mu, double x,
                    const std::optional<CarlesonBox>& region) {
  double total = 0.0;
  for (const auto& p : mu.points) {
    if (region && !region->contains(p.x, p.t)) continue;
    double d = x - p.x;
    total += p.mass * p.t * p.t / (p.t * p.t + d * d);
  }
  return total;
}

namespace {

// Stable difference g(b) - g(a) of the positive-side kernel, telescoped
// through the branch knots so each segment uses a cancellation-free formula.
double positive_kernel_diff(double a, double b, const TruncationSpec& spec) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> pts{a};
  for (double k : {spec.alpha, spec.beta, 2 * spec.beta})
    if (k > a && k < b) pts.push_back(k);
  pts.push_back(b);
  double diff = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1], mid = 0.5 * (lo + hi);
    if (mid < spec.alpha)
      diff += -(hi - lo) / (spec.alpha * spec.alpha);
    else if (mid <= spec.beta)
      diff += (lo - hi) / (lo * hi);
    else if (mid < 2 * spec.beta)
      diff += -(hi - lo) / (spec.beta * spec.beta);
  }
  return sign * diff;
}

}  // namespace

GradCheckResult kernel_gradient_check(double x, double x_prime, double y,
                                      const TruncationSpec& spec) {
  require(x_prime != x, Err::PreconditionViolated, "x' must differ from x");
  require(2.0 * std::abs(x - x_prime) < std::abs(x - y), Err::PreconditionViolated,
          "need 2|x-x'| < |x-y|");
  double a0 = std::abs(y - x), a1 = std::abs(y - x_prime);
  bool band = (2.0 * spec.alpha < a0) && (a0 < (2.0 / 3.0) * spec.beta);
  auto branch = [&](double v) {
    if (v < spec.alpha) return 0;
    if (v <= spec.beta) return 1;
    if (v < 2 * spec.beta) return 2;
    return 3;
  };
  // same-branch pairs admit cancellation-free closed forms
  if (branch(a0) == branch(a1)) {
    switch (branch(a0)) {
      case 0: return {a0 * a1 / (spec.alpha * spec.alpha), band};
      case 1: return {1.0, band};  // the 1/u branch: the identity is exact
      case 2: return {a0 * a1 / (spec.beta * spec.beta), band};
      default: return {0.0, band};
    }
  }
  double sgn = y > x ? 1.0 : -1.0;
  double diff = sgn * positive_kernel_diff(a0, a1, spec);  // K(y-x') - K(y-x)
  double C = diff * (y - x) * (y - x_prime) / (x_prime - x);
  return {C, band};
}

}  // namespace tw
