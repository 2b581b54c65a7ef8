#pragma once

#include <string>
#include <vector>

#include "tw/constants.hpp"
#include "tw/measure.hpp"

namespace tw {

/// ln 2 / ln 3, the similarity dimension of the middle-thirds set.
double cantor_dimension();

struct CantorGap {
  Interval iv;
  int level = 0;  // gaps of length 3^-level appear 2^{level-1} times
};

struct CantorLevel {
  int n = 0;
  std::vector<Interval> components;  // the 2^n components of C_n, exact triadic endpoints
  std::vector<CantorGap> gaps;       // all gaps up to level n

  static CantorLevel build(int n);
};

/// Level-n approximation: density (3/2)^n on each component of C_n; mass 1.
Weight cantor_weight(int n);

struct HilbertValue {
  double value = 0.0;
  double error_bound = 0.0;  // rigorous bound on |H w_true(x) - value|
};

/// H(w_n)(x) for x in a gap, by exact logarithmic integration over the
/// level-tail_depth components (tail_depth = -1 uses n).
HilbertValue hilbert_of_cantor(int n, double x, int tail_depth = -1);

struct GapPoints {
  double z = 0.0;        // unique zero of H w_n on the gap
  double z_prime = 0.0;  // unique point with H w_n = |G|^{d-1}, d = ln2/ln3
  double residual_z = 0.0;
  double residual_zp = 0.0;
  double dist_z = 0.0;   // distance of z to the gap boundary
  double dist_zp = 0.0;
};

GapPoints locate_points(int n, const Interval& G, double tol = 1e-12);

struct CalibratedGap {
  Interval gap;
  int level = 0;
  GapPoints points;
  double mass = 0.0;  // s_G = 2 |G|^{2 - ln2/ln3}
};

struct SigmaPair {
  Weight sigma;        // atoms at the zeros z_G
  Weight sigma_prime;  // atoms at the points z'_G
  std::vector<CalibratedGap> gaps;
};

SigmaPair build_sigma_pair(int n, double tol = 1e-12);

struct ExampleReport {
  int depth = 0;
  // per-gap calibration
  double max_one_sided_ratio_error = 0.0;  // | w(G±|G|) s_G / |G|^2 - 2 |
  double tripled_ratio = 0.0;              // w(3G) s_G / |G|^2 (constant 4)
  double max_mass_error = 0.0;             // two-route mass agreement
  double max_root_residual = 0.0;          // |H w(z_G)| * |G|^{1-d}
  double max_gap_point_spread = 0.0;       // max |z - z'| / |G|
  double min_boundary_distance = 0.0;      // min dist(z or z', boundary)/|G|
  double central_zero = 0.0;
  double symmetry_defect = 0.0;  // atoms under x -> 1-x
  // suprema over the triadic family
  double a2_full_sigma = 0.0, a2_full_sigma_prime = 0.0;
  double testing_sigma_to_w = 0.0, testing_w_to_sigma = 0.0;
  double testing_sigma_prime_to_w = 0.0, testing_w_to_sigma_prime = 0.0;
  // divergence table: partial sums of Hw(z'_G)^2 s_G by level
  std::vector<double> divergence_partial;  // index N-1 holds sum over levels <= N
  // dual pivotal partial sums over gaps and the level increments
  std::vector<double> pivotal_dual_partial;
  std::vector<double> pivotal_dual_increment;
  double dual_energy_sum = 0.0;  // sum P(w·I0, G)^2 E(sigma,G)^2 sigma(G); exactly 0
  // maximal-function surrogate: per-level sums of P(w,G)^2 sigma(G)
  std::vector<double> maximal_surrogate_increment;
  double min_derivative_margin = 0.0;  // FD slope / |G|^{d-2}, cushion 1/4
  std::string notes;
};

ExampleReport example_report(int n, double tol = 1e-12);

/// Triadic family: all components and gaps to depth n, plus [0,1].
IntervalFamily cantor_family(int n);

}  // namespace tw
