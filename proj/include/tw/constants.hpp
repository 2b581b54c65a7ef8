#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tw/haar.hpp"
#include "tw/measure.hpp"
#include "tw/transforms.hpp"

namespace tw {

struct IntervalFamily {
  std::vector<Interval> members;
  std::string descriptor;

  static IntervalFamily dyadic_to_depth(const Interval& window, int depth);
  static IntervalFamily explicit_list(std::vector<Interval> members, std::string descriptor);
};

struct ConstantsReport {
  std::vector<double> per_interval;  // aligned with family members
  std::vector<Interval> intervals;
  double supremum = 0.0;
  int argmax = -1;
  int skipped = 0;
  std::string family_desc;
  std::string notes;

  void record(const Interval& I, double v);
};

struct A2Reports {
  ConstantsReport simple, half_forward, half_dual, full;
};

A2Reports a2_constants(const Weight& sigma, const Weight& w, const IntervalFamily& family,
                       const QuadratureBudget& budget = {});

/// sup_I sqrt( ∫_I H(sigma 1_I)^2 dw / sigma(I) ), skipping sigma(I)=0.
ConstantsReport testing_constant(const Weight& sigma, const Weight& w,
                                 const IntervalFamily& family, const TruncationSpec& spec,
                                 const QuadratureBudget& budget = {});

struct EnergyIneqRow {
  double lhs = 0.0;       // sum P(sigma,I)^2 * |I|^{-2} ∫_I (x-mean)^2 dw
  double lhs_alt = 0.0;   // literal stacking with an extra w(I) factor
  double ratio = 0.0;     // lhs / (H^2 sigma(I0))
};

struct EnergyIneqReport {
  std::vector<EnergyIneqRow> forward, dual;
  double max_forward_ratio = 0.0;
  double max_dual_ratio = 0.0;
};

EnergyIneqReport energy_inequality_report(const Weight& sigma, const Weight& w, const Interval& I0,
                                          const std::vector<std::vector<Interval>>& partitions,
                                          double H);

struct PivotalResult {
  double forward = 0.0;  // sum P(sigma·I0, I)^2 w(I) / sigma(I0)
  double dual = 0.0;
};

PivotalResult pivotal_report(const Weight& sigma, const Weight& w, const Interval& I0,
                             const std::vector<Interval>& partition);

struct HardyResult {
  double B = 0.0;  // sup_r sqrt( what([r,inf)) * sigma((0,r]) )
  double N = 0.0;  // operator norm of f -> ∫_0^x f dsigma, L2(sigma)->L2(what)
};

HardyResult hardy_constant_and_norm(const Weight& sigma, const Weight& w_hat);

/// e:4compact scan: both boundary half-Poisson terms, sup over an r-ladder
/// refined at atom-induced breakpoints.
double weak_boundedness_constant(const Weight& sigma, const Weight& w, double a,
                                 int points_per_decade = 64);

struct PoissonTestingReport {
  ConstantsReport forward, dual, forward_tripled, dual_tripled;
};

PoissonTestingReport poisson_testing_report(const Weight& sigma, const UpperHalfPlaneMeasure& mu,
                                            const IntervalFamily& family,
                                            const QuadratureBudget& budget = {});

struct LambdaCoeff {
  DyadicInterval interval;
  double value = 0.0;
};

struct DyadicPositiveReport {
  double norm = 0.0;
  double testing = 0.0;       // sqrt normalization, max of the two directions
  double testing_forward = 0.0;
  double testing_dual = 0.0;
  double testing_linear_forward = 0.0;  // ratio itself (the linear-in-T reading)
  double testing_linear_dual = 0.0;
};

DyadicPositiveReport dyadic_positive_report(const std::vector<LambdaCoeff>& lambdas,
                                            const Weight& sigma,
                                            const UpperHalfPlaneMeasure& mu);

struct RatioStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per-(x,y,t): Monte Carlo over random shifted grids of the averaged dyadic
/// kernel sum divided by the true kernel 1/(t^2+(x-y)^2).
RatioStats poisson_average_check(double x, double y, double t, int trials, uint64_t seed);

struct MonoParams {
  int r = 4;
  double epsilon = 0.25;
  int ladder = 16;  // truncation ladder resolution per axis
};

struct MonoResult {
  double lhs = 0.0;        // sup over truncations of |<H nu, h_J^w>_w|
  double canonical = 0.0;  // <H^c mu, h_J^w>_w, the two-sided middle term
  double rhs = 0.0;        // P(mu, J) <x/|J|, h_J^w>_w
};

MonoResult monotonicity_check(const Interval& J, const Interval& I, const Weight& mu,
                              const Weight& w, const std::vector<int>& nu_signs,
                              const MonoParams& params = {});

using FamilyBuilder = std::function<std::vector<Interval>(double Lambda, double lambda)>;

struct CompactnessRow {
  double Lambda = 0.0;
  double lambda = 0.0;
  double full_small = 0.0;       // sup P(sigma0,I) P(w0,I) over small I
  double half_forward = 0.0;     // sup P(sigma0,I) w0(I)/|I|
  double half_dual = 0.0;        // sup P(w0,I) sigma0(I)/|I|
  double testing_small = -1.0;   // sup testing ratio (sqrt), -1 when skipped
  double boundary = 0.0;         // the four half-Poisson boundary terms, max
};

struct CompactnessDiagnostics {
  std::vector<CompactnessRow> rows;
  std::string trend_full;      // "decreasing" | "flat" | "increasing"
  std::string trend_half_forward;
  std::string trend_half_dual;
};

/// Default anchored family: widths lambda around the given anchor points.
FamilyBuilder anchored_family(std::vector<double> anchors);

CompactnessDiagnostics compactness_diagnostics(const Weight& sigma, const Weight& w,
                                               const std::vector<double>& Lambda_ladder,
                                               const std::vector<double>& lambda_ladder,
                                               const FamilyBuilder& builder,
                                               bool include_testing = false,
                                               const QuadratureBudget& budget = {});

}  // namespace tw
