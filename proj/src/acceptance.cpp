#include "tw/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tw/cantor.hpp"
#include "tw/constants.hpp"
#include "tw/grid.hpp"
#include "tw/haar.hpp"
#include "tw/report.hpp"
#include "tw/rng.hpp"

namespace tw {

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "FAILED: " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Weight random_atoms_on_leaves(CounterRng& rng, int count, int depth) {
  std::vector<Atom> atoms;
  std::vector<char> used(static_cast<std::size_t>(1) << depth, 0);
  double n = std::exp2(depth);
  while (static_cast<int>(atoms.size()) < count) {
    int k = rng.uniform_int(0, (1 << depth) - 1);
    if (used[static_cast<std::size_t>(k)]) continue;
    used[static_cast<std::size_t>(k)] = 1;
    atoms.push_back({(k + 0.5) / n, rng.uniform(0.1, 2.0), std::nullopt});
  }
  return Weight::from_atoms(std::move(atoms), "random-atoms");
}

DyadicInterval unit_root(const std::shared_ptr<const GridSpec>& spec) {
  return DyadicInterval{0, 0, spec.get()};
}

std::shared_ptr<const GridSpec> unit_spec(int depth) {
  GridSpec gs;
  gs.base = GridBase::Dyadic;
  gs.min_level = -depth;
  gs.max_level = 0;
  gs.window = Interval(0.0, 1.0);
  return std::make_shared<const GridSpec>(gs);
}

// measured H = A2^{1/2} + max testing over the dyadic family (atomic pairs
// keep this cheap and exact)
double measured_H(const Weight& sigma, const Weight& w, int depth) {
  IntervalFamily fam = IntervalFamily::dyadic_to_depth(Interval(0.0, 1.0), depth);
  double a2 = a2_constants(sigma, w, fam).full.supremum;
  TruncationSpec spec(1e-9, 16.0);
  double t1 = testing_constant(sigma, w, fam, spec).supremum;
  double t2 = testing_constant(w, sigma, fam, spec).supremum;
  return std::sqrt(a2) + std::max(t1, t2);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(uint64_t seed, bool verbose) {
  std::vector<CriterionResult> out;
  auto run = [&](int id, const std::string& name, auto&& body) {
    Checker c;
    auto t0 = Clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    out.push_back({id, name, c.ok, c.detail.str(), secs});
    if (verbose)
      std::printf("[%s] criterion %2d: %s (%.2fs) %s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(),
                  secs, c.detail.str().c_str());
  };

  // Shared Cantor pipeline at depths 8 and 6.
  SigmaPair pair8, pair6;
  Weight w8, w6;
  double pair8_seconds = 0.0;
  {
    auto t0 = Clock::now();
    pair8 = build_sigma_pair(8);
    w8 = cantor_weight(8);
    pair8_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    pair6 = build_sigma_pair(6);
    w6 = cantor_weight(6);
  }
  const double d = cantor_dimension();

  run(1, "cantor calibration", [&](Checker& c) {
    double max_ratio_err = 0.0, max_mass_err = 0.0;
    for (const auto& cg : pair8.gaps) {
      double len = cg.gap.length();
      double one_sided = w8.mass(Interval(cg.gap.hi, cg.gap.hi + len)) * cg.mass / (len * len);
      max_ratio_err = std::max(max_ratio_err, std::abs(one_sided - 2.0));
      double route_b = 2.0 * std::pow(len, 2.0 - d);
      max_mass_err = std::max(max_mass_err, std::abs(cg.mass - route_b) / route_b);
    }
    c.expect(max_ratio_err <= 1e-12, "gap ratio error " + fmt(max_ratio_err) + " > 1e-12");
    c.expect(max_mass_err <= 1e-14, "mass error " + fmt(max_mass_err) + " > 1e-14");
    c.expect(pair8_seconds < 10.0, "construction took " + fmt(pair8_seconds) + "s");
    c.note("ratio err " + fmt(max_ratio_err) + ", mass err " + fmt(max_mass_err) + ", build " +
           fmt(pair8_seconds) + "s");
  });

  run(2, "central-gap zero and interior roots", [&](Checker& c) {
    double central = 0.0, spread = 0.0, min_dist = 1e300;
    for (const auto& cg : pair8.gaps) {
      if (cg.level == 1) central = cg.points.z;
      spread = std::max(spread, std::abs(cg.points.z - cg.points.z_prime) / cg.gap.length());
      min_dist = std::min(min_dist,
                          std::min(cg.points.dist_z, cg.points.dist_zp) / cg.gap.length());
    }
    c.expect(std::abs(central - 0.5) <= 1e-10, "central zero " + fmt(central));
    c.expect(min_dist > 0.0, "root on a gap boundary");
    c.expect(spread < 0.5, "max |z - z'|/|G| = " + fmt(spread));
    c.note("central " + fmt(central) + ", spread " + fmt(spread) + ", min boundary dist " +
           fmt(min_dist));
  });

  run(3, "sigma-prime divergence", [&](Checker& c) {
    auto t0 = Clock::now();
    std::vector<double> partial(8, 0.0);
    for (const auto& cg : pair8.gaps) {
      double hz = hilbert_of_cantor(8, cg.points.z_prime).value;
      for (int N = cg.level; N <= 8; ++N) partial[static_cast<std::size_t>(N - 1)] += hz * hz * cg.mass;
    }
    for (int N = 2; N <= 8; ++N) {
      double v = partial[static_cast<std::size_t>(N - 1)];
      c.expect(std::abs(v - N) <= 0.02 * N,
               "partial sum at N=" + std::to_string(N) + " is " + fmt(v));
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(secs + pair8_seconds < 60.0, "runtime " + fmt(secs + pair8_seconds) + "s");
    c.note("sums " + fmt(partial[1]) + ".." + fmt(partial[7]));
  });

  run(4, "pivotal failure with zero dual energy", [&](Checker& c) {
    Interval I0(Rat(0), Rat(1));
    Weight wI0 = w8.restrict_to({I0});
    std::vector<double> level_sum(8, 0.0);
    double dual_energy = 0.0;
    for (const auto& cg : pair8.gaps) {
      double Pw = poisson_integral(wI0, cg.gap);
      level_sum[static_cast<std::size_t>(cg.level - 1)] += Pw * Pw * cg.mass;
      dual_energy += Pw * Pw * energy_variance_form(pair8.sigma, cg.gap);
    }
    double w_total = w8.mass(I0);
    double running = 0.0, prev = 0.0;
    for (int n = 1; n <= 8; ++n) {
      running += level_sum[static_cast<std::size_t>(n - 1)] / w_total;
      c.expect(running > prev, "partial sums not strictly increasing");
      if (n >= 3)
        c.expect(level_sum[static_cast<std::size_t>(n - 1)] / w_total >= 0.2,
                 "level " + std::to_string(n) + " increment " +
                     fmt(level_sum[static_cast<std::size_t>(n - 1)] / w_total));
      prev = running;
    }
    c.expect(dual_energy == 0.0, "dual energy sum " + fmt(dual_energy) + " != 0");
    c.note("final dual pivotal sum " + fmt(running));
  });

  run(5, "boundedness trends depth 6 vs 8", [&](Checker& c) {
    IntervalFamily f6 = cantor_family(6), f8 = cantor_family(8);
    TruncationSpec spec(1e-9, 8.0);
    double a6 = a2_constants(pair6.sigma, w6, f6).full.supremum;
    double a8 = a2_constants(pair8.sigma, w8, f8).full.supremum;
    double t6f = testing_constant(pair6.sigma, w6, f6, spec).supremum;
    double t8f = testing_constant(pair8.sigma, w8, f8, spec).supremum;
    double t6d = testing_constant(w6, pair6.sigma, f6, spec).supremum;
    double t8d = testing_constant(w8, pair8.sigma, f8, spec).supremum;
    auto drift = [](double a, double b) { return std::abs(b / a - 1.0); };
    c.expect(drift(a6, a8) <= 0.25, "A2 drift " + fmt(drift(a6, a8)));
    c.expect(drift(t6f, t8f) <= 0.25, "forward testing drift " + fmt(drift(t6f, t8f)));
    c.expect(drift(t6d, t8d) <= 0.25, "dual testing drift " + fmt(drift(t6d, t8d)));
    c.note("A2 " + fmt(a6) + "->" + fmt(a8) + ", T_fwd " + fmt(t6f) + "->" + fmt(t8f) +
           ", T_dual " + fmt(t6d) + "->" + fmt(t8d));
  });

  run(6, "hardy two-route agreement", [&](Checker& c) {
    auto t0 = Clock::now();
    int violations = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      CounterRng rng(seed, 600 + static_cast<uint64_t>(inst));
      auto gen = [&](int count) {
        std::vector<Atom> atoms;
        for (int i = 0; i < count; ++i)
          atoms.push_back({rng.uniform(0.01, 10.0), rng.uniform(0.05, 3.0), std::nullopt});
        return Weight::from_atoms(std::move(atoms), "hardy");
      };
      HardyResult hr = hardy_constant_and_norm(gen(rng.uniform_int(1, 20)),
                                               gen(rng.uniform_int(1, 20)));
      if (!(hr.B <= hr.N * (1 + 1e-12) && hr.N <= 2 * hr.B * (1 + 1e-12))) ++violations;
      worst = std::max(worst, hr.B > 0 ? hr.N / hr.B : 0.0);
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(violations == 0, std::to_string(violations) + " instances violate B <= N <= 2B");
    c.expect(secs < 5.0, "runtime " + fmt(secs) + "s");
    c.note("max N/B " + fmt(worst) + ", " + fmt(secs) + "s");
  });

  run(7, "dyadic positive operator", [&](Checker& c) {
    auto t0 = Clock::now();
    auto spec = unit_spec(6);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      CounterRng rng(seed, 700 + static_cast<uint64_t>(inst));
      std::vector<LambdaCoeff> lambdas;
      for (int lvl = 0; lvl >= -6; --lvl) {
        long long n = 1ll << (-lvl);
        for (long long k = 0; k < n; ++k)
          if (rng.u01() < 0.25)
            lambdas.push_back({DyadicInterval{lvl, k, spec.get()},
                               rng.uniform(0.2, 2.0) * std::exp2(-2.0 * lvl)});
      }
      if (lambdas.empty()) lambdas.push_back({unit_root(spec), 1.0});
      std::vector<Atom> atoms;
      int na = rng.uniform_int(2, 30);
      for (int i = 0; i < na; ++i)
        atoms.push_back({rng.u01(), rng.uniform(0.05, 2.0), std::nullopt});
      Weight sigma = Weight::from_atoms(std::move(atoms), "dyadic-sigma");
      UpperHalfPlaneMeasure mu;
      int np = rng.uniform_int(2, 30);
      for (int i = 0; i < np; ++i)
        mu.points.push_back({rng.u01(), rng.log_uniform(1.0 / 64, 1.0), rng.uniform(0.05, 2.0)});
      DyadicPositiveReport rep = dyadic_positive_report(lambdas, sigma, mu);
      if (!(rep.testing <= rep.norm * (1 + 1e-12))) ++violations;
      if (!(rep.norm <= 8.0 * rep.testing)) ++violations;
      if (rep.testing > 0) worst_ratio = std::max(worst_ratio, rep.norm / rep.testing);
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(violations == 0, std::to_string(violations) + " violations of testing<=norm<=8*testing");
    c.expect(secs < 30.0, "runtime " + fmt(secs) + "s");
    c.note("max norm/testing " + fmt(worst_ratio) + " (regression), " + fmt(secs) + "s");
  });

  run(8, "good/bad statistics", [&](Checker& c) {
    double prev = 1e300;
    for (int r : {4, 6, 8}) {
      GoodnessParams p(0.5, r);
      BadProbEstimate est = estimate_bad_probability(p, 10000, seed);
      double bound = 4.0 / p.epsilon * std::exp2(-p.epsilon * r);
      c.expect(est.estimate <= bound,
               "r=" + std::to_string(r) + " estimate " + fmt(est.estimate) + " > " + fmt(bound));
      c.expect(est.estimate <= prev + 3 * est.stderr_,
               "estimate not decreasing at r=" + std::to_string(r));
      c.note("r=" + std::to_string(r) + ": " + fmt(est.estimate) + "±" + fmt(est.stderr_));
      prev = est.estimate;
    }
  });

  run(9, "haar suite", [&](Checker& c) {
    auto spec = unit_spec(8);
    DyadicInterval root = unit_root(spec);
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
      CounterRng rng(seed, 900 + static_cast<uint64_t>(inst));
      Weight w = random_atoms_on_leaves(rng, rng.uniform_int(3, 24), 8);
      double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), f0 = rng.uniform(1, 9);
      Func f = [=](double x) { return a * x + b + std::sin(f0 * x); };
      HaarExpansion e = haar_transform(w, f, root, 8);
      // mean zero and orthonormality on sampled pairs
      std::vector<int> live;
      for (int i = 0; i < static_cast<int>(e.nodes().size()); ++i)
        if (!e.node(i).degenerate) live.push_back(i);
      for (int id : live) {
        HaarFunction h = haar_function(w, e.node(id).iv);
        double mean = 0.0, norm = 0.0;
        for (const auto& atom : w.atoms()) {
          mean += h.eval(atom.pos) * atom.mass;
          norm += h.eval(atom.pos) * h.eval(atom.pos) * atom.mass;
        }
        worst = std::max({worst, std::abs(mean), std::abs(norm - 1.0)});
      }
      for (int k = 0; k < 200 && live.size() >= 2; ++k) {
        int i = live[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(live.size()) - 1))];
        int j = live[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(live.size()) - 1))];
        if (i == j) continue;
        HaarFunction hi = haar_function(w, e.node(i).iv);
        HaarFunction hj = haar_function(w, e.node(j).iv);
        double ip = 0.0;
        for (const auto& atom : w.atoms()) ip += hi.eval(atom.pos) * hj.eval(atom.pos) * atom.mass;
        worst = std::max(worst, std::abs(ip));
      }
      // Plancherel
      double var = e.norm_sq() - e.mean() * e.mean() * e.mass_root();
      worst = std::max(worst, std::abs(var - e.sum_coeff_sq()) / std::max(1.0, var));
      // telescoping + reconstruction on resolved scales
      for (const auto& n : e.nodes()) {
        if (n.mass <= 0) continue;
        worst = std::max(worst, std::abs(e.reconstruct_leaf_average(n.iv) - n.avg_f()));
      }
      // martingale identity pointwise at atoms
      for (int id : live) {
        const HaarNode& n = e.node(id);
        HaarFunction h = haar_function(w, n.iv);
        for (const auto& atom : w.atoms()) {
          if (!n.iv.contains_point(atom.pos)) continue;
          auto kids = n.iv.children();
          double child_avg = 0.0;
          for (const auto& kid : kids)
            if (kid.contains_point(atom.pos)) child_avg = e.cond_expectation(kid);
          double delta = n.coeff * h.eval(atom.pos);
          worst = std::max(worst, std::abs(delta - (child_avg - n.avg_f())));
        }
      }
    }
    c.expect(worst <= 1e-10, "max defect " + fmt(worst));
    c.note("max defect " + fmt(worst));
  });

  run(10, "stopping data", [&](Checker& c) {
    auto spec = unit_spec(8);
    DyadicInterval root = unit_root(spec);
    double worst_carleson = 0.0, worst_quasi = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      CounterRng rng(seed, 1000 + static_cast<uint64_t>(inst));
      Weight sigma = random_atoms_on_leaves(rng, rng.uniform_int(4, 20), 8);
      Weight w = random_atoms_on_leaves(rng, rng.uniform_int(4, 20), 8);
      double a = rng.uniform(-3, 3), b = rng.uniform(0.1, 4), p = rng.uniform(2, 12);
      Func f = [=](double x) { return a + b * std::cos(p * x) + (x - 0.5); };
      HaarExpansion fe = haar_transform(sigma, f, root, 8);
      double H = measured_H(sigma, w, 8);
      StoppingData sd = build_stopping_data(fe, sigma, w, H);
      // exhaustive sigma-Carleson over every dyadic S in the window
      for (const auto& n : fe.nodes()) {
        double denom = sigma.mass(n.iv.interval(), true, false);
        if (denom <= 0) continue;
        double num = 0.0;
        for (const auto& t : sd.nodes)
          if (n.iv.contains(t.iv)) num += sigma.mass(t.iv.interval(), true, false);
        worst_carleson = std::max(worst_carleson, num / denom);
      }
      QuasiOrthResult q = quasi_orthogonality_check(sd, fe);
      if (q.rhs > 0) worst_quasi = std::max(worst_quasi, q.lhs / q.rhs);
    }
    c.expect(worst_carleson <= 2.0, "carleson ratio " + fmt(worst_carleson));
    c.expect(worst_quasi <= 64.0, "quasi-orthogonality ratio " + fmt(worst_quasi));
    c.note("carleson " + fmt(worst_carleson) + ", quasi " + fmt(worst_quasi) + " (logged)");
  });

  run(11, "monotonicity principle", [&](Checker& c) {
    double worst_signed = 0.0, lo_pos = 1e300, hi_pos = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
      CounterRng rng(seed, 1100 + static_cast<uint64_t>(inst));
      Interval J(0.0, 1.0);
      Interval I(-8.0, 9.0);
      std::vector<Atom> watoms;
      int nw = rng.uniform_int(2, 6);
      for (int i = 0; i < nw; ++i)
        watoms.push_back({rng.uniform(0.01, 0.99), rng.uniform(0.1, 2.0), std::nullopt});
      Weight w = Weight::from_atoms(std::move(watoms), "mono-w");
      std::vector<Atom> muatoms;
      std::vector<int> signs, plus;
      int nm = rng.uniform_int(1, 8);
      double dmin = rng.uniform(16.0, 64.0);
      for (int i = 0; i < nm; ++i) {
        muatoms.push_back({1.0 + dmin + rng.uniform(0.0, 1000.0), rng.uniform(0.1, 2.0),
                           std::nullopt});
        signs.push_back(rng.bit() ? 1 : -1);
        plus.push_back(1);
      }
      Weight mu = Weight::from_atoms(std::move(muatoms), "mono-mu");
      MonoResult pos = monotonicity_check(J, I, mu, w, plus);
      MonoResult sgn = monotonicity_check(J, I, mu, w, signs);
      if (pos.rhs <= 0) continue;
      lo_pos = std::min(lo_pos, pos.lhs / pos.rhs);
      hi_pos = std::max(hi_pos, pos.lhs / pos.rhs);
      worst_signed = std::max(worst_signed, sgn.lhs / sgn.rhs);
    }
    c.expect(worst_signed <= 8.0, "signed lhs/rhs " + fmt(worst_signed));
    c.expect(lo_pos >= 0.25 && hi_pos <= 4.0,
             "positive ratio range [" + fmt(lo_pos) + "," + fmt(hi_pos) + "]");
    c.note("positive ratio in [" + fmt(lo_pos) + "," + fmt(hi_pos) + "], signed max " +
           fmt(worst_signed));
  });

  run(12, "kernel gradient identity", [&](Checker& c) {
    TruncationSpec spec(1.0, 100.0, TruncMode::Smooth);
    CounterRng rng(seed, 1200);
    double worst_band = 0.0;
    bool in_range = true;
    for (int i = 0; i < 10000; ++i) {
      double x = rng.uniform(-5, 5);
      double dist = rng.log_uniform(spec.alpha / 100, (2.0 / 3.0) * spec.beta * 0.999);
      double y = x + (rng.bit() ? dist : -dist);
      double u = rng.uniform(-0.499, 0.499) * dist;
      if (u == 0.0) continue;
      auto res = kernel_gradient_check(x, x + u, y, spec);
      if (!(res.C > 0.0 && res.C <= 1.0 + 1e-12)) in_range = false;
      if (res.in_exact_band) worst_band = std::max(worst_band, std::abs(res.C - 1.0));
    }
    c.expect(in_range, "C left (0,1]");
    c.expect(worst_band <= 1e-12, "band deviation " + fmt(worst_band));
    c.note("max |C-1| in band " + fmt(worst_band));
  });

  run(13, "poisson average vs true kernel", [&](Checker& c) {
    CounterRng rng(seed, 1300);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 100; ++i) {
      double x = rng.uniform(-10, 10);
      double y = rng.uniform(-10, 10);
      double t = rng.log_uniform(1e-3, 10.0);
      RatioStats st = poisson_average_check(x, y, t, 1000, seed + static_cast<uint64_t>(i));
      lo = std::min(lo, st.mean);
      hi = std::max(hi, st.mean);
      if (!(st.mean >= 1.0 / 256 && st.mean <= 4.0)) {
        c.expect(false, "ratio " + fmt(st.mean) + " at x=" + fmt(x) + " y=" + fmt(y) +
                            " t=" + fmt(t));
        break;
      }
    }
    c.note("ratio range [" + fmt(lo) + "," + fmt(hi) + "]");
  });

  run(14, "compactness diagnostics", [&](Checker& c) {
    // (delta_0, x/ln^2 x dx): half-Poisson rung values converge to 1/ln 3
    WeightPair lp = builtin_pair("log-compact");
    std::vector<double> lambdas;
    std::vector<int> ks;
    for (int k = 24; k <= 40; k += 2) {
      ks.push_back(k);
      lambdas.push_back(std::pow(3.0, -k));
    }
    CompactnessDiagnostics diag = compactness_diagnostics(
        lp.sigma, lp.w, {1.0}, lambdas, anchored_family({0.0}), false);
    // Richardson in 1/k: value_k = L - c/k + O(1/k^2)
    std::vector<double> vals;
    for (const auto& row : diag.rows) vals.push_back(row.half_forward);
    std::size_t m = vals.size();
    double k2 = ks[m - 1], k1 = ks[m - 2];
    double extrapolated = vals[m - 1] + (vals[m - 1] - vals[m - 2]) * (k1 / (k2 - k1));
    double oracle = 1.0 / std::log(3.0);
    c.expect(std::abs(extrapolated - oracle) <= 1e-3,
             "extrapolated " + fmt(extrapolated) + " vs 1/ln3 " + fmt(oracle));
    c.expect(diag.trend_half_forward == "flat", "trend " + diag.trend_half_forward);
    // (delta_0, dx on (1,inf)): full product near zero stays >= 1/2
    WeightPair tp = builtin_pair("tail-compact");
    CompactnessDiagnostics diag2 = compactness_diagnostics(
        tp.sigma, tp.w, {1000.0}, {1e-2, 1e-4, 1e-6}, anchored_family({0.0}), false);
    double last = diag2.rows.back().full_small;
    c.expect(last >= 0.5, "tail-pair product " + fmt(last));
    c.expect(diag2.trend_full == "flat", "tail-pair trend " + diag2.trend_full);
    c.note("extrapolated " + fmt(extrapolated) + ", tail product " + fmt(last));
  });

  return out;
}

}  // namespace tw
