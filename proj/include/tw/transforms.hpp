#pragma once

#include <optional>
#include <vector>

#include "tw/measure.hpp"

namespace tw {

enum class TruncMode { Hard, Smooth };

struct TruncationSpec {
  double alpha = 1e-9;
  double beta = 1e9;
  TruncMode mode = TruncMode::Hard;

  TruncationSpec() = default;
  TruncationSpec(double a, double b, TruncMode m = TruncMode::Hard) : alpha(a), beta(b), mode(m) {
    require(0 < a && a < b, Err::PreconditionViolated, "need 0 < alpha < beta");
  }
};

/// C^1 convex-minorant truncation kernel: odd, zero at 0, equal to 1/y on
/// [alpha, beta], linear caps on (0,alpha) and (beta,2beta), zero beyond 2beta.
double smooth_kernel(double y, const TruncationSpec& spec);

/// Hard truncation kernel: 1/y on alpha < |y| < beta, zero elsewhere.
double hard_kernel(double y, const TruncationSpec& spec);

double truncation_kernel(double y, const TruncationSpec& spec);

/// H_{alpha,beta}(f w)(x). Pass f = nullptr for f ≡ 1 (density pieces are
/// then integrated in closed form).
double truncated_hilbert(const Weight& w, const Func& f, double x, const TruncationSpec& spec,
                         const QuadratureBudget& budget = {});

/// A_alpha(f w)(x) = (1/4alpha) ∫_{x-2alpha}^{x+2alpha} f dw.
double averaging_op(const Weight& w, const Func& f, double x, double alpha,
                    const QuadratureBudget& budget = {});

/// P(w, I) = ∫ |I| / (|I| + dist(x,I))^2 dw. Closed form on polynomial
/// pieces and constant tails; DivergentTail when the tail grows.
double poisson_integral(const Weight& w, const Interval& I, const QuadratureBudget& budget = {});

/// Poisson extension P(h w)(x,t) = ∫ h(y) t/(t+|x-y|)^2 dw(y).
double poisson_extension(const Weight& w, const Func& h, double x, double t,
                         const QuadratureBudget& budget = {});

struct UhpPoint {
  double x = 0.0;
  double t = 0.0;
  double mass = 0.0;
};

struct CarlesonBox {
  Interval base{0.0, 1.0};
  double height = 1.0;
  bool tripled = false;  // (3I) x [0, |I|]

  bool contains(double x, double t) const {
    if (t > height) return false;
    if (tripled) {
      double len = base.length();
      return x >= base.lo - len && x <= base.hi + len;
    }
    return x >= base.lo && x <= base.hi;
  }
  static CarlesonBox over(const Interval& I, bool tripled = false) {
    return {I, I.length(), tripled};
  }
};

/// Finite point measure on the upper half-plane.
struct UpperHalfPlaneMeasure {
  std::vector<UhpPoint> points;

  void validate() const {
    for (const auto& p : points)
      require(p.t > 0 && p.mass > 0, Err::PreconditionViolated,
              "upper-half-plane points need t > 0 and mass > 0");
  }
  double total_mass() const {
    double s = 0;
    for (const auto& p : points) s += p.mass;
    return s;
  }
  /// ∫_box t^2 dmu
  double t_squared_mass(const std::optional<CarlesonBox>& box = std::nullopt) const {
    double s = 0;
    for (const auto& p : points)
      if (!box || box->contains(p.x, p.t)) s += p.t * p.t * p.mass;
    return s;
  }
};

/// Dual Poisson at x: sum of mass * t^2/(t^2 + (x-y)^2) over points in the
/// optional Carleson-box filter.
double dual_poisson(const UpperHalfPlaneMeasure& mu, double x,
                    const std::optional<CarlesonBox>& region = std::nullopt);

struct GradCheckResult {
  double C = 0.0;
  bool in_exact_band = false;
};

/// The kernel difference identity: C = [K(y-x') - K(y-x)] (y-x)(y-x') / (x'-x),
/// with C = 1 exactly on 2alpha < |x-y| < (2/3) beta.
GradCheckResult kernel_gradient_check(double x, double x_prime, double y,
                                      const TruncationSpec& spec);

}  // namespace tw
