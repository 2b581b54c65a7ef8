#include "tw/constants.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

#include "tw/parallel.hpp"
#include "tw/rng.hpp"

namespace tw {

IntervalFamily IntervalFamily::dyadic_to_depth(const Interval& window, int depth) {
  IntervalFamily f;
  f.descriptor = "dyadic depth " + std::to_string(depth) + " on [" + std::to_string(window.lo) +
                 "," + std::to_string(window.hi) + "]";
  double len = window.length();
  for (int d = 0; d <= depth; ++d) {
    long long n = 1ll << d;
    for (long long k = 0; k < n; ++k)
      f.members.emplace_back(window.lo + len * static_cast<double>(k) / static_cast<double>(n),
                             window.lo + len * static_cast<double>(k + 1) / static_cast<double>(n));
  }
  return f;
}

IntervalFamily IntervalFamily::explicit_list(std::vector<Interval> members, std::string desc) {
  IntervalFamily f;
  f.members = std::move(members);
  f.descriptor = std::move(desc);
  return f;
}

void ConstantsReport::record(const Interval& I, double v) {
  intervals.push_back(I);
  per_interval.push_back(v);
  if (argmax < 0 || v > supremum) {
    supremum = v;
    argmax = static_cast<int>(per_interval.size()) - 1;
  }
}

A2Reports a2_constants(const Weight& sigma, const Weight& w, const IntervalFamily& family,
                       const QuadratureBudget& budget) {
  A2Reports out;
  for (auto* r : {&out.simple, &out.half_forward, &out.half_dual, &out.full})
    r->family_desc = family.descriptor;
  struct Row {
    double simple, hf, hd, full;
  };
  std::vector<Row> rows(family.members.size());
  parallel_for(family.members.size(), [&](std::size_t i) {
    const Interval& I = family.members[i];
    double s = sigma.mass(I), ww = w.mass(I), len = I.length();
    double Ps = poisson_integral(sigma, I, budget);
    double Pw = poisson_integral(w, I, budget);
    rows[i] = {s * ww / (len * len), Ps * ww / len, Pw * s / len, Ps * Pw};
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.simple.record(family.members[i], rows[i].simple);
    out.half_forward.record(family.members[i], rows[i].hf);
    out.half_dual.record(family.members[i], rows[i].hd);
    out.full.record(family.members[i], rows[i].full);
  }
  return out;
}

namespace {

double testing_ratio(const Weight& sigma, const Weight& w, const Interval& I,
                     const TruncationSpec& spec, const QuadratureBudget& budget) {
  double den = sigma.mass(I);
  if (den <= 0.0) return -1.0;
  Weight sig_I = sigma.restrict_to({I});
  auto h2 = [&](double x) {
    double v = truncated_hilbert(sig_I, nullptr, x, spec, budget);
    return v * v;
  };
  double num = w.integrate(h2, I, budget);
  return num / den;
}

}  // namespace

ConstantsReport testing_constant(const Weight& sigma, const Weight& w,
                                 const IntervalFamily& family, const TruncationSpec& spec,
                                 const QuadratureBudget& budget) {
  ConstantsReport rep;
  rep.family_desc = family.descriptor;
  std::vector<double> vals(family.members.size(), -1.0);
  parallel_for(family.members.size(), [&](std::size_t i) {
    vals[i] = testing_ratio(sigma, w, family.members[i], spec, budget);
  });
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      ++rep.skipped;
      continue;
    }
    rep.record(family.members[i], std::sqrt(vals[i]));
  }
  rep.notes = "sqrt normalization; skipped intervals have sigma(I) = 0";
  return rep;
}

namespace {
void check_partition_endpoints(const Weight& sigma, const Weight& w,
                               const std::vector<Interval>& partition) {
  for (const auto& I : partition)
    for (const auto& wt : {&sigma, &w})
      for (const auto& a : wt->atoms())
        require(a.pos != I.lo && a.pos != I.hi, Err::AtomOnEndpoint,
                "partition endpoint carries a point mass");
}
}  // namespace

EnergyIneqReport energy_inequality_report(const Weight& sigma, const Weight& w, const Interval& I0,
                                          const std::vector<std::vector<Interval>>& partitions,
                                          double H) {
  EnergyIneqReport rep;
  double s0 = sigma.mass(I0), w0 = w.mass(I0);
  for (const auto& partition : partitions) {
    check_partition_endpoints(sigma, w, partition);
    EnergyIneqRow fwd, dua;
    for (const auto& I : partition) {
      double Ps = poisson_integral(sigma, I);
      double Pw = poisson_integral(w, I);
      double ew = energy_variance_form(w, I);   // = E(w,I)^2 w(I) as consumed
      double es = energy_variance_form(sigma, I);
      fwd.lhs += Ps * Ps * ew;
      fwd.lhs_alt += Ps * Ps * ew * w.mass(I);
      dua.lhs += Pw * Pw * es;
      dua.lhs_alt += Pw * Pw * es * sigma.mass(I);
    }
    fwd.ratio = s0 > 0 ? fwd.lhs / (H * H * s0) : 0.0;
    dua.ratio = w0 > 0 ? dua.lhs / (H * H * w0) : 0.0;
    rep.max_forward_ratio = std::max(rep.max_forward_ratio, fwd.ratio);
    rep.max_dual_ratio = std::max(rep.max_dual_ratio, dua.ratio);
    rep.forward.push_back(fwd);
    rep.dual.push_back(dua);
  }
  return rep;
}

PivotalResult pivotal_report(const Weight& sigma, const Weight& w, const Interval& I0,
                             const std::vector<Interval>& partition) {
  check_partition_endpoints(sigma, w, partition);
  Weight sig0 = sigma.restrict_to({I0});
  Weight w0 = w.restrict_to({I0});
  double ms = sigma.mass(I0), mw = w.mass(I0);
  PivotalResult r;
  for (const auto& I : partition) {
    double Ps = poisson_integral(sig0, I);
    double Pw = poisson_integral(w0, I);
    r.forward += Ps * Ps * w.mass(I);
    r.dual += Pw * Pw * sigma.mass(I);
  }
  if (ms > 0) r.forward /= ms;
  if (mw > 0) r.dual /= mw;
  return r;
}

HardyResult hardy_constant_and_norm(const Weight& sigma, const Weight& w_hat) {
  require(sigma.purely_atomic() && w_hat.purely_atomic(), Err::NonAtomic,
          "hardy diagnostics take atomic weights");
  for (const auto* wt : {&sigma, &w_hat})
    for (const auto& a : wt->atoms())
      require(a.pos > 0.0, Err::PreconditionViolated, "weights must live on (0, infinity)");

  // B^2 = sup_r what([r,inf)) * sigma((0,r]); piecewise constant between atom
  // positions, so scanning positions is exact.
  std::set<double> breakpoints;
  for (const auto& a : sigma.atoms()) breakpoints.insert(a.pos);
  for (const auto& a : w_hat.atoms()) breakpoints.insert(a.pos);
  double B2 = 0.0;
  for (double r : breakpoints) {
    double tail = 0.0, head = 0.0;
    for (const auto& a : w_hat.atoms())
      if (a.pos >= r) tail += a.mass;
    for (const auto& a : sigma.atoms())
      if (a.pos <= r) head += a.mass;
    B2 = std::max(B2, tail * head);
  }

  // Exact operator norm of (Tf)(x) = ∫_(0,x] f dsigma as a weighted matrix.
  const auto& sa = sigma.atoms();
  const auto& wa = w_hat.atoms();
  HardyResult out;
  out.B = std::sqrt(B2);
  if (sa.empty() || wa.empty()) return out;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(wa.size()), static_cast<Eigen::Index>(sa.size()));
  for (std::size_t j = 0; j < wa.size(); ++j)
    for (std::size_t i = 0; i < sa.size(); ++i)
      M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          sa[i].pos <= wa[j].pos ? std::sqrt(wa[j].mass * sa[i].mass) : 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  out.N = svd.singularValues()(0);
  return out;
}

double weak_boundedness_constant(const Weight& sigma, const Weight& w, double a,
                                 int points_per_decade) {
  Interval sb = sigma.support_bounds();
  Interval wb = w.support_bounds();
  const Weight* left = &sigma;
  const Weight* right = &w;
  if (sb.lo >= a && wb.hi <= a) std::swap(left, right), std::swap(sb, wb);
  require(sb.hi <= a && wb.lo >= a, Err::SupportsOverlap,
          "weights must live on opposite sides of the separating point");

  std::set<double> ladder;
  double lo = 1e-6, hi = 1.0;
  auto widen = [&](double d) {
    if (d > 0 && std::isfinite(d)) {
      lo = std::min(lo, d / 4);
      hi = std::max(hi, d * 4);
    }
  };
  for (const auto& atom : left->atoms()) widen(a - atom.pos);
  for (const auto& atom : right->atoms()) widen(atom.pos - a);
  widen(std::isfinite(sb.lo) ? a - sb.lo : 0.0);
  widen(std::isfinite(wb.hi) ? wb.hi - a : 0.0);
  int decades = static_cast<int>(std::ceil(std::log10(hi / lo)));
  for (int i = 0; i <= decades * points_per_decade; ++i)
    ladder.insert(lo * std::pow(10.0, static_cast<double>(i) / points_per_decade));
  for (const auto& atom : left->atoms())
    for (double f : {1.0 - 1e-9, 1.0, 1.0 + 1e-9}) ladder.insert((a - atom.pos) * f);
  for (const auto& atom : right->atoms())
    for (double f : {1.0 - 1e-9, 1.0, 1.0 + 1e-9}) ladder.insert((atom.pos - a) * f);

  double best = 0.0;
  for (double r : ladder) {
    if (!(r > 0) || !std::isfinite(r)) continue;
    Interval Ir(a, a + r);
    double t1 = poisson_integral(*left, Ir) * right->mass(Ir, false, false) / r;
    double t2 = poisson_integral(*right, Ir) * left->mass(Interval(a - r, a), false, false) / r;
    best = std::max(best, t1 + t2);
  }
  return best;
}

PoissonTestingReport poisson_testing_report(const Weight& sigma, const UpperHalfPlaneMeasure& mu,
                                            const IntervalFamily& family,
                                            const QuadratureBudget& budget) {
  PoissonTestingReport rep;
  for (auto* r : {&rep.forward, &rep.dual, &rep.forward_tripled, &rep.dual_tripled})
    r->family_desc = family.descriptor;
  for (const auto& I : family.members) {
    double sI = sigma.mass(I);
    Weight sig_I = sigma.restrict_to({I});
    for (bool tripled : {false, true}) {
      CarlesonBox box = CarlesonBox::over(I, tripled);
      // forward: ∫_box P(sigma 1_I)^2 dmu / sigma(I)
      ConstantsReport& fr = tripled ? rep.forward_tripled : rep.forward;
      if (sI > 0) {
        double num = 0.0;
        for (const auto& p : mu.points)
          if (box.contains(p.x, p.t)) {
            double v = poisson_extension(sig_I, nullptr, p.x, p.t, budget);
            num += v * v * p.mass;
          }
        fr.record(I, num / sI);
      } else {
        ++fr.skipped;
      }
      // dual: ∫_{(3)I} P*(t 1_box mu)^2 dsigma / ∫_box t^2 dmu
      ConstantsReport& dr = tripled ? rep.dual_tripled : rep.dual;
      CarlesonBox plain = CarlesonBox::over(I, false);
      double den = mu.t_squared_mass(plain);
      if (den > 0) {
        Interval region = tripled ? I.tripled() : I;
        auto f2 = [&](double x) {
          double v = dual_poisson(mu, x, plain);
          return v * v;
        };
        double num = sigma.integrate(f2, region, budget);
        dr.record(I, num / den);
      } else {
        ++dr.skipped;
      }
    }
  }
  for (auto* r : {&rep.forward, &rep.dual, &rep.forward_tripled, &rep.dual_tripled})
    r->notes = "skipped intervals have a zero denominator";
  return rep;
}

DyadicPositiveReport dyadic_positive_report(const std::vector<LambdaCoeff>& lambdas,
                                            const Weight& sigma,
                                            const UpperHalfPlaneMeasure& mu) {
  require(sigma.purely_atomic(), Err::PreconditionViolated,
          "dyadic positive operator diagnostics take atomic sigma");
  const auto& atoms = sigma.atoms();
  DyadicPositiveReport rep;
  if (atoms.empty() || mu.points.empty()) return rep;

  const std::size_t nl = lambdas.size(), np = mu.points.size(), na = atoms.size();
  std::vector<std::vector<char>> atom_in(nl, std::vector<char>(na, 0));
  std::vector<std::vector<char>> point_in(nl, std::vector<char>(np, 0));
  for (std::size_t l = 0; l < nl; ++l) {
    Interval iv = lambdas[l].interval.interval();
    CarlesonBox box = CarlesonBox::over(iv);
    for (std::size_t a = 0; a < na; ++a) atom_in[l][a] = iv.contains(atoms[a].pos, true, false);
    for (std::size_t p = 0; p < np; ++p)
      point_in[l][p] = box.contains(mu.points[p].x, mu.points[p].t);
  }

  Eigen::MatrixXd M(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(na));
  M.setZero();
  for (std::size_t l = 0; l < nl; ++l) {
    if (lambdas[l].value == 0.0) continue;
    for (std::size_t p = 0; p < np; ++p) {
      if (!point_in[l][p]) continue;
      for (std::size_t a = 0; a < na; ++a)
        if (atom_in[l][a])
          M(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a)) +=
              lambdas[l].value * std::sqrt(mu.points[p].mass * atoms[a].mass);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  rep.norm = svd.singularValues()(0);

  // testing over the lambda-support intervals; both normalizations
  for (std::size_t l = 0; l < nl; ++l) {
    double sI = 0.0, muI = 0.0;
    for (std::size_t a = 0; a < na; ++a)
      if (atom_in[l][a]) sI += atoms[a].mass;
    for (std::size_t p = 0; p < np; ++p)
      if (point_in[l][p]) muI += mu.points[p].mass;
    if (sI > 0) {  // forward: ∫_boxI (T_sigma 1_I)^2 dmu / sigma(I)
      double num = 0.0;
      for (std::size_t p = 0; p < np; ++p) {
        if (!point_in[l][p]) continue;
        double v = 0.0;
        for (std::size_t l2 = 0; l2 < nl; ++l2) {
          if (lambdas[l2].value == 0.0 || !point_in[l2][p]) continue;
          double m = 0.0;
          for (std::size_t a = 0; a < na; ++a)
            if (atom_in[l2][a] && atom_in[l][a]) m += atoms[a].mass;
          v += lambdas[l2].value * m;
        }
        num += v * v * mu.points[p].mass;
      }
      rep.testing_linear_forward = std::max(rep.testing_linear_forward, num / sI);
    }
    if (muI > 0) {  // dual: ∫_I (T*_mu 1_boxI)^2 dsigma / mu(boxI)
      double num = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        if (!atom_in[l][a]) continue;
        double v = 0.0;
        for (std::size_t l2 = 0; l2 < nl; ++l2) {
          if (lambdas[l2].value == 0.0 || !atom_in[l2][a]) continue;
          double m = 0.0;
          for (std::size_t p = 0; p < np; ++p)
            if (point_in[l2][p] && point_in[l][p]) m += mu.points[p].mass;
          v += lambdas[l2].value * m;
        }
        num += v * v * atoms[a].mass;
      }
      rep.testing_linear_dual = std::max(rep.testing_linear_dual, num / muI);
    }
  }
  rep.testing_forward = std::sqrt(rep.testing_linear_forward);
  rep.testing_dual = std::sqrt(rep.testing_linear_dual);
  rep.testing = std::max(rep.testing_forward, rep.testing_dual);
  return rep;
}

RatioStats poisson_average_check(double x, double y, double t, int trials, uint64_t seed) {
  require(t > 0, Err::PreconditionViolated, "t must be positive");
  double true_kernel = 1.0 / (t * t + (x - y) * (x - y));
  int lvl_lo = static_cast<int>(std::ceil(std::log2(t)));
  int lvl_hi = static_cast<int>(std::ceil(std::log2(std::max(t, std::abs(x - y))))) + 40;
  RatioStats st;
  st.min = 1e300;
  st.max = -1e300;
  double sum = 0.0, sum2 = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<uint64_t>(trial));
    // One shared fine-tail shift plus per-level bits, per the grid law.
    double value = 0.0;
    double shift = 0.0;
    // bits below lvl_lo contribute a common offset in [0, 2^{lvl_lo}); draw it
    // as a uniform since only (x - s), (y - s) relative to the lattice matter
    shift = rng.u01() * std::exp2(lvl_lo);
    for (int lvl = lvl_lo; lvl <= lvl_hi; ++lvl) {
      double len = std::exp2(lvl);
      double xs = std::floor((x - shift) / len);
      double ys = std::floor((y - shift) / len);
      if (xs == ys) value += 1.0 / (len * len);
      shift += len * rng.bit();  // bit at this level moves all coarser lattices
    }
    double ratio = value / true_kernel;
    sum += ratio;
    sum2 += ratio * ratio;
    st.min = std::min(st.min, ratio);
    st.max = std::max(st.max, ratio);
  }
  st.mean = sum / trials;
  double var = std::max(sum2 / trials - st.mean * st.mean, 0.0);
  st.stderr_ = std::sqrt(var / trials);
  return st;
}

MonoResult monotonicity_check(const Interval& J, const Interval& I, const Weight& mu,
                              const Weight& w, const std::vector<int>& nu_signs,
                              const MonoParams& params) {
  require(I.lo <= J.lo && J.hi <= I.hi, Err::PreconditionViolated, "J must sit inside I");
  require(std::exp2(params.r) * J.length() <= I.length() * (1 + 1e-12),
          Err::PreconditionViolated, "need 2^r |J| <= |I|");
  require(mu.purely_atomic(), Err::PreconditionViolated, "mu must be atomic");
  require(nu_signs.size() == mu.atoms().size(), Err::PreconditionViolated,
          "one sign per atom of mu");
  double dmin = 1e300, dmax = 0.0;
  for (const auto& a : mu.atoms()) {
    require(!(a.pos > I.lo && a.pos < I.hi), Err::PreconditionViolated,
            "mu must be supported off I");
    double d = J.dist(a.pos);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d + J.length());
  }
  double sep = std::exp2(params.r * (1.0 - params.epsilon)) * J.length();
  require(dmin >= sep, Err::SeparationTooSmall, "support of mu too close to J");

  HaarFunction h = haar_function_on(w, J);
  MonoResult res;
  if (h.degenerate) return res;

  // rhs: canonical Poisson-side value
  res.rhs = poisson_integral(mu, J) * h.x_inner / J.length();

  // lhs: sup over a truncation ladder (canonical value included)
  auto pair_value = [&](const TruncationSpec& spec) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
      const auto& a = mu.atoms()[i];
      double s = nu_signs[i] >= 0 ? 1.0 : -1.0;
      for (const auto& wa : w.atoms()) {
        if (wa.pos < J.lo || wa.pos > J.hi) continue;
        total += s * a.mass * wa.mass * h.eval(wa.pos) * smooth_kernel(a.pos - wa.pos, spec);
      }
      // density parts of w inside J
      if (!w.pieces().empty()) {
        auto f = [&](double xx) { return h.eval(xx) * smooth_kernel(a.pos - xx, spec); };
        total += s * a.mass * w.integrate(f, J);
      }
    }
    return std::abs(total);
  };

  double best = 0.0;
  for (int ia = 0; ia <= params.ladder; ++ia) {
    double alpha = dmin / 8.0 * std::pow(16.0 * 8.0 * dmax / dmin, double(ia) / params.ladder);
    for (int ib = 0; ib <= params.ladder; ++ib) {
      double beta = alpha * std::pow(4.0 * dmax / alpha, double(ib) / params.ladder) * 1.000001;
      if (!(beta > alpha)) continue;
      best = std::max(best, pair_value(TruncationSpec(alpha, beta, TruncMode::Smooth)));
    }
  }
  best = std::max(best, pair_value(TruncationSpec(dmin / 2, 2 * dmax, TruncMode::Smooth)));
  res.lhs = best;
  return res;
}

FamilyBuilder anchored_family(std::vector<double> anchors) {
  return [anchors](double Lambda, double lambda) {
    std::vector<Interval> out;
    for (double a : anchors) {
      if (std::abs(a) > Lambda) continue;
      out.emplace_back(a, a + lambda);
      out.emplace_back(a - lambda, a);
      out.emplace_back(a - lambda / 2, a + lambda / 2);
    }
    return out;
  };
}

namespace {
std::string trend_of(const std::vector<double>& vals) {
  if (vals.size() < 2) return "flat";
  double first = vals.front(), last = vals.back();
  if (first <= 0 && last <= 0) return "flat";
  if (last < 0.25 * first) return "decreasing";
  if (last > 4.0 * std::max(first, 1e-300)) return "increasing";
  return "flat";
}
}  // namespace

CompactnessDiagnostics compactness_diagnostics(const Weight& sigma, const Weight& w,
                                               const std::vector<double>& Lambda_ladder,
                                               const std::vector<double>& lambda_ladder,
                                               const FamilyBuilder& builder, bool include_testing,
                                               const QuadratureBudget& budget) {
  CompactnessDiagnostics diag;
  std::vector<double> fulls, hfs, hds;
  for (double Lambda : Lambda_ladder) {
    Interval window(-Lambda, Lambda);
    Weight s0 = sigma.restrict_to({window});
    Weight w0 = w.restrict_to({window});
    for (double lambda : lambda_ladder) {
      CompactnessRow row;
      row.Lambda = Lambda;
      row.lambda = lambda;
      for (const Interval& I : builder(Lambda, lambda)) {
        if (I.length() > lambda * (1 + 1e-12)) continue;
        double Ps = poisson_integral(s0, I, budget);
        double Pw = poisson_integral(w0, I, budget);
        row.full_small = std::max(row.full_small, Ps * Pw);
        row.half_forward = std::max(row.half_forward, Ps * w0.mass(I) / I.length());
        row.half_dual = std::max(row.half_dual, Pw * s0.mass(I) / I.length());
        if (include_testing) {
          double tr = testing_ratio(sigma, w, I, TruncationSpec(1e-12, 1e9), budget);
          if (tr >= 0) row.testing_small = std::max(row.testing_small, std::sqrt(tr));
        }
      }
      // boundary half-Poisson terms at ±Lambda
      for (double side : {1.0, -1.0}) {
        double edge = side * Lambda;
        Interval outer = side > 0 ? Interval(edge, edge + lambda) : Interval(edge - lambda, edge);
        Interval innr = side > 0 ? Interval(edge - lambda, edge) : Interval(edge, edge + lambda);
        Weight souter = side > 0 ? sigma.restrict_to({Interval(edge, edge + 1e12)})
                                 : sigma.restrict_to({Interval(edge - 1e12, edge)});
        Weight wouter = side > 0 ? w.restrict_to({Interval(edge, edge + 1e12)})
                                 : w.restrict_to({Interval(edge - 1e12, edge)});
        double b1 = poisson_integral(souter, outer, budget) * w.mass(innr) / lambda;
        double b2 = poisson_integral(wouter, outer, budget) * sigma.mass(innr) / lambda;
        row.boundary = std::max({row.boundary, b1, b2});
      }
      diag.rows.push_back(row);
      fulls.push_back(row.full_small);
      hfs.push_back(row.half_forward);
      hds.push_back(row.half_dual);
    }
  }
  diag.trend_full = trend_of(fulls);
  diag.trend_half_forward = trend_of(hfs);
  diag.trend_half_dual = trend_of(hds);
  return diag;
}

}  // namespace tw
