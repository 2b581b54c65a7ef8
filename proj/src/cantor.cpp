#include "tw/cantor.hpp"

#include <algorithm>
#include <cmath>

#include "tw/haar.hpp"
#include "tw/parallel.hpp"
#include "tw/transforms.hpp"

namespace tw {

double cantor_dimension() { return std::log(2.0) / std::log(3.0); }

CantorLevel CantorLevel::build(int n) {
  require(n >= 0 && n <= 12, Err::DepthTooLarge, "cantor depth limited to 12");
  CantorLevel lvl;
  lvl.n = n;
  lvl.components.push_back(Interval(Rat(0), Rat(1)));
  for (int k = 1; k <= n; ++k) {
    std::vector<Interval> next;
    for (const auto& c : lvl.components) {
      Rat a = *c.lo_exact, b = *c.hi_exact;
      Rat third = (b - a) * Rat(1, 3);
      next.push_back(Interval(a, a + third));
      next.push_back(Interval(b - third, b));
      lvl.gaps.push_back({Interval(a + third, b - third), k});
    }
    lvl.components = std::move(next);
  }
  return lvl;
}

Weight cantor_weight(int n) {
  CantorLevel lvl = CantorLevel::build(n);
  double density = std::pow(1.5, n);  // exact for n <= 12
  std::vector<DensityPiece> pieces;
  for (const auto& c : lvl.components) {
    DensityPiece p;
    p.iv = c;
    p.coef = {density, 0.0, 0.0, 0.0};
    pieces.push_back(p);
  }
  return Weight({}, std::move(pieces), "cantor-w" + std::to_string(n));
}

namespace {

/// Flat component table so repeated evaluations avoid rebuilding the exact
/// construction; one instance serves a whole gap sweep.
struct HilbertEvaluator {
  std::vector<double> lo, hi, width;
  double density = 1.0;
  double per_comp_mass = 1.0;

  explicit HilbertEvaluator(int depth) {
    CantorLevel lvl = CantorLevel::build(depth);
    for (const auto& c : lvl.components) {
      lo.push_back(c.lo);
      hi.push_back(c.hi);
      width.push_back(c.length());
    }
    density = std::pow(1.5, depth);
    per_comp_mass = std::exp2(-static_cast<double>(depth));
  }

  HilbertValue eval(double x) const {
    HilbertValue out;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      require(!(x >= lo[i] && x <= hi[i]), Err::PointOnSupport,
              "evaluation point inside the support");
      // ∫_c rho dy/(y-x) = rho * log1p(|c| / (lo - x)), stable for far pieces
      out.value += density * std::log1p(width[i] / (lo[i] - x));
      // coupling bound: same mass per component at every deeper level
      out.error_bound += per_comp_mass * width[i] / std::abs((lo[i] - x) * (hi[i] - x));
    }
    return out;
  }
};

GapPoints locate_points_impl(const HilbertEvaluator& H, const Interval& G, double tol) {
  double len = G.length();
  double d = cantor_dimension();
  double scale = std::pow(len, d - 1.0);  // |G|^{-1+d} > 0, the z' target
  auto f = [&](double x) { return H.eval(x).value; };

  auto solve = [&](double target) {
    // H w_n is strictly increasing on the gap and diverges at both ends.
    double eta = len / 4;
    double lo = G.lo + eta, hi = G.hi - eta;
    int guard = 0;
    while (f(lo) > target) {
      eta /= 4;
      lo = G.lo + eta;
      require(++guard < 400, Err::BracketingFailed, "no sign change near the left endpoint");
    }
    guard = 0;
    eta = len / 4;
    while (f(hi) < target) {
      eta /= 4;
      hi = G.hi - eta;
      require(++guard < 400, Err::BracketingFailed, "no sign change near the right endpoint");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-17 * len; ++it) {
      double mid = 0.5 * (lo + hi);
      (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  GapPoints p;
  p.z = solve(0.0);
  p.z_prime = solve(scale);
  p.residual_z = std::abs(f(p.z));
  p.residual_zp = std::abs(f(p.z_prime) - scale);
  require(p.residual_z <= tol * std::max(scale, 1.0) * 1e6, Err::BracketingFailed,
          "zero residual unexpectedly large");
  p.dist_z = std::min(p.z - G.lo, G.hi - p.z);
  p.dist_zp = std::min(p.z_prime - G.lo, G.hi - p.z_prime);
  return p;
}

}  // namespace

HilbertValue hilbert_of_cantor(int n, double x, int tail_depth) {
  if (tail_depth < 0) tail_depth = n;
  require(tail_depth >= n, Err::PreconditionViolated, "tail_depth must be at least the depth");
  return HilbertEvaluator(tail_depth).eval(x);
}

GapPoints locate_points(int n, const Interval& G, double tol) {
  return locate_points_impl(HilbertEvaluator(n), G, tol);
}

SigmaPair build_sigma_pair(int n, double tol) {
  CantorLevel lvl = CantorLevel::build(n);
  HilbertEvaluator H(n);
  SigmaPair out;
  out.gaps.resize(lvl.gaps.size());
  parallel_for(lvl.gaps.size(), [&](std::size_t i) {
    const CantorGap& g = lvl.gaps[i];
    CalibratedGap cg;
    cg.gap = g.iv;
    cg.level = g.level;
    cg.points = locate_points_impl(H, g.iv, tol);
    // s_G = 2 |G|^{2-d} = 2 * 2^m / 9^m for |G| = 3^-m; exact in doubles
    cg.mass = 2.0 * std::exp2(static_cast<double>(g.level)) /
              std::pow(9.0, static_cast<double>(g.level));
    out.gaps[i] = cg;
  });
  std::vector<Atom> za, zpa;
  for (const auto& cg : out.gaps) {
    za.push_back({cg.points.z, cg.mass, std::nullopt});
    zpa.push_back({cg.points.z_prime, cg.mass, std::nullopt});
  }
  out.sigma = Weight::from_atoms(std::move(za), "cantor-sigma" + std::to_string(n));
  out.sigma_prime = Weight::from_atoms(std::move(zpa), "cantor-sigma-prime" + std::to_string(n));
  return out;
}

IntervalFamily cantor_family(int n) {
  CantorLevel lvl = CantorLevel::build(n);
  std::vector<Interval> members;
  // components of every level up to n
  for (int k = 0; k <= n; ++k) {
    CantorLevel lk = CantorLevel::build(k);
    for (const auto& c : lk.components) members.push_back(c);
  }
  for (const auto& g : lvl.gaps) members.push_back(g.iv);
  return IntervalFamily::explicit_list(std::move(members),
                                       "triadic components and gaps to depth " +
                                           std::to_string(n));
}

ExampleReport example_report(int n, double tol) {
  ExampleReport rep;
  rep.depth = n;
  const double d = cantor_dimension();
  Weight w = cantor_weight(n);
  SigmaPair pair = build_sigma_pair(n, tol);
  const Weight& sigma = pair.sigma;
  const Weight& sigma_prime = pair.sigma_prime;
  Interval I0(Rat(0), Rat(1));

  // per-gap calibration
  HilbertEvaluator H(n);
  rep.min_boundary_distance = 1e300;
  rep.min_derivative_margin = 1e300;
  for (const auto& cg : pair.gaps) {
    double len = cg.gap.length();
    Rat glen = *cg.gap.hi_exact - *cg.gap.lo_exact;
    double right_mass = w.mass(Interval(*cg.gap.hi_exact, *cg.gap.hi_exact + glen));
    double one_sided = right_mass * cg.mass / (len * len);
    rep.max_one_sided_ratio_error = std::max(rep.max_one_sided_ratio_error,
                                             std::abs(one_sided - 2.0));
    rep.tripled_ratio = w.mass(cg.gap.tripled()) * cg.mass / (len * len);
    double mass_alt = 2.0 * std::pow(len, 2.0 - d);
    rep.max_mass_error = std::max(rep.max_mass_error,
                                  std::abs(cg.mass - mass_alt) / mass_alt);
    double scale = std::pow(len, d - 1.0);
    rep.max_root_residual = std::max(rep.max_root_residual, cg.points.residual_z / scale);
    rep.max_gap_point_spread =
        std::max(rep.max_gap_point_spread, std::abs(cg.points.z - cg.points.z_prime) / len);
    rep.min_boundary_distance = std::min(
        rep.min_boundary_distance, std::min(cg.points.dist_z, cg.points.dist_zp) / len);
    if (cg.level == 1) rep.central_zero = cg.points.z;
    // finite-difference slope at the gap center vs |G|^{d-2}
    double h = len / 1024;
    double c0 = cg.gap.mid();
    double slope = (H.eval(c0 + h).value - H.eval(c0 - h).value) / (2 * h);
    rep.min_derivative_margin =
        std::min(rep.min_derivative_margin, slope / std::pow(len, d - 2.0));
  }

  // symmetry of the atom set under x -> 1-x
  {
    std::vector<double> zs;
    for (const auto& cg : pair.gaps) zs.push_back(cg.points.z);
    std::sort(zs.begin(), zs.end());
    for (std::size_t i = 0; i < zs.size(); ++i)
      rep.symmetry_defect =
          std::max(rep.symmetry_defect, std::abs(zs[i] + zs[zs.size() - 1 - i] - 1.0));
  }

  // family suprema
  IntervalFamily family = cantor_family(n);
  TruncationSpec spec(1e-9, 8.0, TruncMode::Hard);
  rep.a2_full_sigma = a2_constants(sigma, w, family).full.supremum;
  rep.a2_full_sigma_prime = a2_constants(sigma_prime, w, family).full.supremum;
  rep.testing_sigma_to_w = testing_constant(sigma, w, family, spec).supremum;
  rep.testing_w_to_sigma = testing_constant(w, sigma, family, spec).supremum;
  rep.testing_sigma_prime_to_w = testing_constant(sigma_prime, w, family, spec).supremum;
  rep.testing_w_to_sigma_prime = testing_constant(w, sigma_prime, family, spec).supremum;

  // divergence table and pivotal sums
  rep.divergence_partial.assign(static_cast<std::size_t>(n), 0.0);
  rep.pivotal_dual_partial.assign(static_cast<std::size_t>(n), 0.0);
  rep.maximal_surrogate_increment.assign(static_cast<std::size_t>(n), 0.0);
  Weight w_I0 = w.restrict_to({I0});
  for (const auto& cg : pair.gaps) {
    double hz = H.eval(cg.points.z_prime).value;
    double Pw = poisson_integral(w_I0, cg.gap);
    double energy_term = energy_variance_form(sigma, cg.gap);  // exact 0 for point masses
    rep.dual_energy_sum += Pw * Pw * energy_term;
    std::size_t li = static_cast<std::size_t>(cg.level - 1);
    for (std::size_t N = li; N < rep.divergence_partial.size(); ++N) {
      rep.divergence_partial[N] += hz * hz * cg.mass;
      rep.pivotal_dual_partial[N] += Pw * Pw * cg.mass;
    }
    rep.maximal_surrogate_increment[li] += poisson_integral(w, cg.gap) *
                                           poisson_integral(w, cg.gap) * cg.mass;
  }
  double w_total = w.mass(I0);
  for (auto& v : rep.pivotal_dual_partial) v /= w_total;
  rep.pivotal_dual_increment.assign(rep.pivotal_dual_partial.size(), 0.0);
  for (std::size_t i = 0; i < rep.pivotal_dual_partial.size(); ++i)
    rep.pivotal_dual_increment[i] =
        rep.pivotal_dual_partial[i] - (i > 0 ? rep.pivotal_dual_partial[i - 1] : 0.0);

  rep.notes =
      "one-sided ratio w(G±|G|) s_G / |G|^2 = 2 exactly; the tripled variant "
      "w(3G) s_G / |G|^2 equals 4 since w(3G) = 2 w(G±|G|)";
  return rep;
}

}  // namespace tw
