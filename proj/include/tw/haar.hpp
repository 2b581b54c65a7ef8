#pragma once

#include <map>
#include <memory>
#include <vector>

#include "tw/grid.hpp"
#include "tw/measure.hpp"
#include "tw/transforms.hpp"

namespace tw {

/// Weighted Haar function of an interval: constant on each half, w-mean
/// zero, unit L^2(w) norm, nonnegative inner product with x.
struct HaarFunction {
  Interval support{0.0, 1.0};
  double left_value = 0.0;
  double right_value = 0.0;
  bool degenerate = true;
  double x_inner = 0.0;  // <x, h>_w

  double eval(double x) const;
};

HaarFunction haar_function(const Weight& w, const DyadicInterval& I);
HaarFunction haar_function_on(const Weight& w, const Interval& I);

/// <x, h_I^w>_w, zero when degenerate.
double haar_x_coeff(const Weight& w, const DyadicInterval& I);

struct HaarNode {
  DyadicInterval iv;
  double mass = 0.0;
  double int_f = 0.0;     // ∫ f dw over the node
  double int_absf = 0.0;  // ∫ |f| dw
  double coeff = 0.0;     // <f, h_I>_w
  double x_coeff = 0.0;   // <x, h_I>_w
  bool degenerate = true;
  int parent = -1;
  std::vector<int> children;

  double avg_f() const { return mass > 0 ? int_f / mass : 0.0; }
  double avg_absf() const { return mass > 0 ? int_absf / mass : 0.0; }
};

/// Haar expansion of f over the dyadic window below root, resolved to the
/// given depth. The weight is admissible for the grid by precondition.
class HaarExpansion {
 public:
  HaarExpansion() = default;

  const Weight& weight() const { return weight_; }
  const DyadicInterval& root() const { return nodes_[0].iv; }
  int depth() const { return depth_; }
  const std::vector<HaarNode>& nodes() const { return nodes_; }
  const HaarNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  int find(const DyadicInterval& iv) const;  // -1 if absent

  double mean() const { return nodes_[0].avg_f(); }
  double norm_sq() const { return int_f2_; }  // ∫ f^2 dw over root
  double mass_root() const { return nodes_[0].mass; }

  double coefficient(const DyadicInterval& iv) const;
  double sum_coeff_sq() const;

  /// E^w_J f for a node in the window.
  double cond_expectation(const DyadicInterval& J) const;

  /// Reconstruction at the resolved scale: mean + sum of martingale
  /// differences along the leaf chain.
  double reconstruct_leaf_average(const DyadicInterval& leaf) const;

  friend HaarExpansion haar_transform(const Weight& w, const Func& f, const DyadicInterval& root,
                                      int depth, const QuadratureBudget& budget);

 private:
  Weight weight_;
  std::shared_ptr<const GridSpec> spec_;
  int depth_ = 0;
  double int_f2_ = 0.0;
  std::vector<HaarNode> nodes_;
  std::map<std::pair<int, long long>, int> index_;
};

HaarExpansion haar_transform(const Weight& w, const Func& f, const DyadicInterval& root, int depth,
                             const QuadratureBudget& budget = {});

/// Haar-sum energy: E(w,I)^2 = |I|^{-2} sum_{J subset I, resolved} <x,h_J>^2.
double energy(const Weight& w, const DyadicInterval& I, int depth);

/// Fully-resolved energy via the centered second moment:
/// |I|^{-2} ∫_I (x - E_I^w x)^2 dw; equals the Haar sum in the deep limit.
/// Returns 0 on zero-mass intervals.
double energy_variance_form(const Weight& w, const Interval& I);

struct StoppingNode {
  DyadicInterval iv;
  double alpha = 0.0;
  int parent = -1;
  std::vector<int> children;
  bool from_energy = false;
};

struct StoppingData {
  std::vector<StoppingNode> nodes;  // nodes[0] is the root

  const StoppingNode& root() const { return nodes[0]; }
  /// sigma-Carleson ratio sup_S sum_{F subset S} sigma(F) / sigma(S), scanned
  /// over all tree nodes S.
  double carleson_ratio(const Weight& sigma) const;
  /// Minimal tree node containing iv, or -1.
  int locate(const DyadicInterval& iv) const;
};

struct StoppingOptions {
  double C0 = 4.0;           // cushion on the energy-inequality constant
  bool thin_mod_r = false;   // restrict candidate levels to one class mod r
  int r = 2;
  int max_children_scan_depth = 64;
};

/// Maximal I strictly inside I0 (to `depth` levels) violating
/// P(sigma·I0, I)^2 · [|I|^{-2} ∫_I (x-mean)^2 dw] > 10·C0·H^2·sigma(I).
std::vector<DyadicInterval> energy_stopping_children(const DyadicInterval& I0, int depth,
                                                     const Weight& sigma, const Weight& w,
                                                     double H, double C0);

StoppingData build_stopping_data(const HaarExpansion& f_exp, const Weight& sigma, const Weight& w,
                                 double H_estimate, const StoppingOptions& opts = {});

struct QuasiOrthResult {
  double lhs = 0.0;  // || sum_F alpha_f(F) 1_F ||_sigma^2
  double rhs = 0.0;  // || f ||_sigma^2
};

QuasiOrthResult quasi_orthogonality_check(const StoppingData& sd, const HaarExpansion& f_exp);

struct IntervalPair {
  DyadicInterval outer;  // Q1
  DyadicInterval inner;  // Q2, strongly inside Q1
};

struct PairCollection {
  DyadicInterval root;  // I0
  std::vector<IntervalPair> pairs;
  int r = 2;  // strong containment: 2^r |Q2| <= |Q1|
};

/// Admissibility: strong containment inside the root, convexity in Q1 at
/// fixed Q2, and no Q2 inside a supplied energy-stopping interval.
void validate_admissible(const PairCollection& pairs,
                         const std::vector<DyadicInterval>& energy_stop);

double stopping_form_size(const PairCollection& pairs, const Weight& sigma, const Weight& w);

double evaluate_stopping_form(const PairCollection& pairs, const HaarExpansion& f_exp,
                              const HaarExpansion& g_exp, const TruncationSpec& spec,
                              const QuadratureBudget& budget = {});

/// Derived measure on the upper half-plane: one point at (center(J), |J|)
/// per (F, maximal J) with mass || P^w_{F,J} x/|J| ||_w^2.
UpperHalfPlaneMeasure build_upper_half_plane_measure(
    const std::vector<DyadicInterval>& F, const std::vector<std::vector<DyadicInterval>>& J_of_F,
    const Weight& w);

}  // namespace tw
