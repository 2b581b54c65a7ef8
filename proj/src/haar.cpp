#include "tw/haar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace tw {

namespace {

void check_admissible_for(const Weight& w, const DyadicInterval& I) {
  // No atom may sit exactly on the endpoints or the child boundary.
  for (const auto& a : w.atoms()) {
    for (const Rat& p : {I.left_exact(), I.right_exact()}) {
      bool hit = a.pos_exact ? (*a.pos_exact == p) : rat_equals_double(p, a.pos);
      require(!hit, Err::NotAdmissible, "atom on a grid endpoint");
    }
  }
}

struct ChildSplit {
  Interval left, right;
  double m_left = 0, m_right = 0, m = 0;
};

ChildSplit split(const Weight& w, const DyadicInterval& I) {
  auto kids = I.children();
  require(kids.size() == 2, Err::PreconditionViolated, "haar functions need a dyadic grid");
  ChildSplit s{kids[0].interval(), kids[1].interval()};
  s.m_left = w.mass(s.left, true, false);
  s.m_right = w.mass(s.right, true, false);
  s.m = s.m_left + s.m_right;
  return s;
}

}  // namespace

double HaarFunction::eval(double x) const {
  if (degenerate) return 0.0;
  if (x < support.lo || x > support.hi) return 0.0;
  return x < support.mid() ? left_value : right_value;
}

namespace {
HaarFunction haar_from_split(const Weight& w, const Interval& I, const ChildSplit& s) {
  HaarFunction h;
  h.support = I;
  if (s.m_left <= 0.0 || s.m_right <= 0.0) return h;  // identically zero
  double scale = std::sqrt(s.m_left * s.m_right / s.m);
  h.left_value = -scale / s.m_left;
  h.right_value = scale / s.m_right;
  h.degenerate = false;
  double mean_l = w.first_moment(s.left).mean;
  double mean_r = w.first_moment(s.right).mean;
  h.x_inner = scale * (mean_r - mean_l);
  return h;
}
}  // namespace

HaarFunction haar_function(const Weight& w, const DyadicInterval& I) {
  check_admissible_for(w, I);
  for (const auto& kid : I.children()) check_admissible_for(w, kid);
  return haar_from_split(w, I.interval(), split(w, I));
}

HaarFunction haar_function_on(const Weight& w, const Interval& I) {
  for (const auto& a : w.atoms())
    require(a.pos != I.lo && a.pos != I.hi && a.pos != I.mid(), Err::NotAdmissible,
            "atom on an interval endpoint or midpoint");
  ChildSplit s;
  s.left = Interval(I.lo, I.mid());
  s.right = Interval(I.mid(), I.hi);
  s.m_left = w.mass(s.left, true, false);
  s.m_right = w.mass(s.right, true, false);
  s.m = s.m_left + s.m_right;
  return haar_from_split(w, I, s);
}

double haar_x_coeff(const Weight& w, const DyadicInterval& I) {
  ChildSplit s = split(w, I);
  if (s.m_left <= 0.0 || s.m_right <= 0.0) return 0.0;
  double scale = std::sqrt(s.m_left * s.m_right / s.m);
  return scale * (w.first_moment(s.right).mean - w.first_moment(s.left).mean);
}

// ---------------------------------------------------------------------------
// HaarExpansion

int HaarExpansion::find(const DyadicInterval& iv) const {
  auto it = index_.find({iv.level, iv.index});
  return it == index_.end() ? -1 : it->second;
}

double HaarExpansion::coefficient(const DyadicInterval& iv) const {
  int id = find(iv);
  return id < 0 ? 0.0 : nodes_[static_cast<std::size_t>(id)].coeff;
}

double HaarExpansion::sum_coeff_sq() const {
  double s = 0;
  for (const auto& n : nodes_) s += n.coeff * n.coeff;
  return s;
}

double HaarExpansion::cond_expectation(const DyadicInterval& J) const {
  int id = find(J);
  require(id >= 0, Err::PreconditionViolated, "interval outside the expansion window");
  return nodes_[static_cast<std::size_t>(id)].avg_f();
}

double HaarExpansion::reconstruct_leaf_average(const DyadicInterval& leaf) const {
  int id = find(leaf);
  require(id >= 0, Err::PreconditionViolated, "leaf outside the expansion window");
  // telescoping: E_leaf f = mean + sum over strict ancestors of E_leaf Delta_I f
  double acc = mean();
  DyadicInterval cur = leaf;
  int cur_id = id;
  while (nodes_[static_cast<std::size_t>(cur_id)].parent >= 0) {
    int pid = nodes_[static_cast<std::size_t>(cur_id)].parent;
    const HaarNode& pn = nodes_[static_cast<std::size_t>(pid)];
    if (!pn.degenerate) {
      // h_parent is constant on each child
      HaarFunction h = haar_function(weight_, pn.iv);
      acc += pn.coeff * h.eval(cur.interval().mid());
    }
    cur_id = pid;
    cur = pn.iv;
  }
  return acc;
}

HaarExpansion haar_transform(const Weight& w, const Func& f, const DyadicInterval& root, int depth,
                             const QuadratureBudget& budget) {
  require(depth >= 0, Err::PreconditionViolated, "depth must be nonnegative");
  HaarExpansion e;
  e.weight_ = w;
  e.depth_ = depth;
  Func ff = f ? f : Func([](double) { return 1.0; });
  Func absf = [ff](double x) { return std::abs(ff(x)); };
  Func f2 = [ff](double x) {
    double v = ff(x);
    return v * v;
  };

  // BFS from root
  std::deque<int> queue;
  auto add_node = [&](const DyadicInterval& iv, int parent) {
    HaarNode n;
    n.iv = iv;
    n.parent = parent;
    check_admissible_for(w, iv);
    Interval I = iv.interval();
    n.mass = w.mass(I, true, parent < 0);  // half-open except the root's right end
    n.int_f = n.mass > 0 ? w.integrate(ff, I, budget) : 0.0;
    n.int_absf = n.mass > 0 ? w.integrate(absf, I, budget) : 0.0;
    e.nodes_.push_back(n);
    int id = static_cast<int>(e.nodes_.size()) - 1;
    e.index_[{iv.level, iv.index}] = id;
    if (parent >= 0) e.nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
  };

  queue.push_back(add_node(root, -1));
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    DyadicInterval iv = e.nodes_[static_cast<std::size_t>(id)].iv;
    if (root.level - iv.level >= depth) continue;
    for (const auto& kid : iv.children()) queue.push_back(add_node(kid, id));
  }

  // coefficients from child masses/averages
  for (auto& n : e.nodes_) {
    if (n.children.size() != 2) continue;
    const HaarNode& L = e.nodes_[static_cast<std::size_t>(n.children[0])];
    const HaarNode& R = e.nodes_[static_cast<std::size_t>(n.children[1])];
    if (L.mass <= 0.0 || R.mass <= 0.0) continue;
    double scale = std::sqrt(L.mass * R.mass / n.mass);
    n.degenerate = false;
    n.coeff = scale * (R.int_f / R.mass - L.int_f / L.mass);
    n.x_coeff = haar_x_coeff(w, n.iv);
  }
  e.int_f2_ = w.integrate(f2, root.interval(), budget);
  return e;
}

double energy(const Weight& w, const DyadicInterval& I, int depth) {
  Interval iv = I.interval();
  require(w.mass(iv) > 0.0, Err::ZeroMass, "energy of a zero-mass interval");
  HaarExpansion e = haar_transform(w, [](double x) { return x; }, I, depth);
  double s = e.sum_coeff_sq();
  double len = iv.length();
  return s / (len * len);
}

double energy_variance_form(const Weight& w, const Interval& I) {
  if (w.mass(I) <= 0.0) return 0.0;
  double cs = w.first_moment(I).centered_second;
  return cs / (I.length() * I.length());
}

// ---------------------------------------------------------------------------
// stopping data

namespace {

bool energy_violator(const Weight& sigma_on_F, const Weight& w, const Interval& I, double H,
                     double C0, double sigma_I) {
  // |I|^{-2} ∫_I (x-mean)^2 dw is the operative E(w,I)^2 w(I); zero when w(I)=0
  double evf = energy_variance_form(w, I);
  if (evf <= 0.0) return false;
  double P = poisson_integral(sigma_on_F, I);
  return P * P * evf > 10.0 * C0 * H * H * sigma_I;
}

}  // namespace

std::vector<DyadicInterval> energy_stopping_children(const DyadicInterval& I0, int depth,
                                                     const Weight& sigma, const Weight& w,
                                                     double H, double C0) {
  Weight sigma_F = sigma.restrict_to({I0.interval()});
  std::vector<DyadicInterval> out;
  std::deque<DyadicInterval> queue;
  for (const auto& kid : I0.children()) queue.push_back(kid);
  while (!queue.empty()) {
    DyadicInterval iv = queue.front();
    queue.pop_front();
    double sig = sigma.mass(iv.interval(), true, false);
    if (energy_violator(sigma_F, w, iv.interval(), H, C0, sig)) {
      out.push_back(iv);
      continue;
    }
    if (I0.level - iv.level < depth)
      for (const auto& kid : iv.children()) queue.push_back(kid);
  }
  return out;
}

StoppingData build_stopping_data(const HaarExpansion& f_exp, const Weight& sigma, const Weight& w,
                                 double H_estimate, const StoppingOptions& opts) {
  const DyadicInterval root = f_exp.root();
  StoppingData sd;
  StoppingNode rn;
  rn.iv = root;
  rn.alpha = f_exp.node(0).avg_absf();
  sd.nodes.push_back(rn);

  auto level_allowed = [&](int level) {
    if (!opts.thin_mod_r) return true;
    return ((root.level - level) % opts.r) == 0;
  };

  std::deque<int> work{0};
  while (!work.empty()) {
    int fid = work.front();
    work.pop_front();
    const DyadicInterval F = sd.nodes[static_cast<std::size_t>(fid)].iv;
    const double alpha = sd.nodes[static_cast<std::size_t>(fid)].alpha;
    Weight sigma_F = sigma.restrict_to({F.interval()});

    std::deque<DyadicInterval> scan;
    for (const auto& kid : F.children())
      if (f_exp.find(kid) >= 0) scan.push_back(kid);
    while (!scan.empty()) {
      DyadicInterval iv = scan.front();
      scan.pop_front();
      int nid = f_exp.find(iv);
      if (nid < 0) continue;
      const HaarNode& node = f_exp.node(nid);
      bool big_average =
          level_allowed(iv.level) && node.mass > 0 && node.avg_absf() >= 10.0 * alpha;
      bool energetic = level_allowed(iv.level) &&
                       energy_violator(sigma_F, w, iv.interval(), H_estimate, opts.C0, node.mass);
      if (big_average || energetic) {
        StoppingNode child;
        child.iv = iv;
        child.parent = fid;
        child.from_energy = energetic && !big_average;
        double avg = node.mass > 0 ? node.avg_absf() : 0.0;
        child.alpha = avg < 2.0 * alpha ? alpha : avg;
        sd.nodes.push_back(child);
        int cid = static_cast<int>(sd.nodes.size()) - 1;
        sd.nodes[static_cast<std::size_t>(fid)].children.push_back(cid);
        work.push_back(cid);
        continue;
      }
      for (const auto& kid : iv.children())
        if (f_exp.find(kid) >= 0) scan.push_back(kid);
    }
  }
  return sd;
}

double StoppingData::carleson_ratio(const Weight& sigma) const {
  double worst = 0.0;
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    double denom = sigma.mass(nodes[s].iv.interval(), true, false);
    if (denom <= 0.0) continue;
    double num = 0.0;
    for (const auto& n : nodes)
      if (nodes[s].iv.contains(n.iv)) num += sigma.mass(n.iv.interval(), true, false);
    worst = std::max(worst, num / denom);
  }
  return worst;
}

int StoppingData::locate(const DyadicInterval& iv) const {
  int best = -1;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].iv.contains(iv))
      if (best < 0 || nodes[static_cast<std::size_t>(best)].iv.contains(nodes[i].iv))
        best = static_cast<int>(i);
  return best;
}

QuasiOrthResult quasi_orthogonality_check(const StoppingData& sd, const HaarExpansion& f_exp) {
  QuasiOrthResult r;
  r.rhs = f_exp.norm_sq();
  // Piecewise-constant value of sum alpha_f(F) 1_F over the expansion leaves.
  double lhs = 0.0;
  for (const auto& n : f_exp.nodes()) {
    if (!n.children.empty()) continue;  // only leaves
    if (n.mass <= 0.0) continue;
    double val = 0.0;
    for (const auto& t : sd.nodes)
      if (t.iv.contains(n.iv)) val += t.alpha;
    lhs += n.mass * val * val;
  }
  r.lhs = lhs;
  return r;
}

// ---------------------------------------------------------------------------
// pair collections

void validate_admissible(const PairCollection& pc,
                         const std::vector<DyadicInterval>& energy_stop) {
  std::map<std::pair<int, long long>, std::set<int>> outer_levels;
  for (const auto& p : pc.pairs) {
    require(p.outer.contains(p.inner), Err::NotAdmissible, "Q2 not contained in Q1");
    require(p.outer.level - p.inner.level >= pc.r, Err::NotAdmissible,
            "Q2 not strongly contained in Q1");
    require(pc.root.contains(p.outer), Err::NotAdmissible, "Q1 outside the root");
    for (const auto& S : energy_stop)
      require(!S.contains(p.inner), Err::NotAdmissible,
              "Q2 inside an energy stopping interval");
    outer_levels[{p.inner.level, p.inner.index}].insert(p.outer.level);
  }
  // convexity in Q1 at fixed Q2: levels of the outer intervals form a
  // contiguous range (the outer intervals containing a fixed Q2 are nested)
  for (const auto& [q2, levels] : outer_levels) {
    if (levels.size() < 2) continue;
    int lo = *levels.begin(), hi = *levels.rbegin();
    require(static_cast<int>(levels.size()) == hi - lo + 1, Err::NotAdmissible,
            "pair collection not convex in Q1");
  }
}

double stopping_form_size(const PairCollection& pc, const Weight& sigma, const Weight& w) {
  // candidate intervals K: the child-toward intervals tilde Q1 and the Q2s
  std::vector<DyadicInterval> inners;
  std::vector<DyadicInterval> candidates;
  auto push_unique = [](std::vector<DyadicInterval>& v, const DyadicInterval& iv) {
    for (const auto& u : v)
      if (u == iv) return;
    v.push_back(iv);
  };
  for (const auto& p : pc.pairs) {
    push_unique(inners, p.inner);
    push_unique(candidates, p.outer.child_toward(p.inner));
    push_unique(candidates, p.inner);
  }
  double best = 0.0;
  Interval root_iv = pc.root.interval();
  for (const auto& K : candidates) {
    double tent = 0.0;
    for (const auto& J : inners)
      if (K.contains(J)) {
        double c = haar_x_coeff(w, J);
        tent += c * c;
      }
    if (tent <= 0.0) continue;
    double sig = sigma.mass(K.interval(), true, false);
    if (sig <= 0.0) return std::numeric_limits<double>::infinity();
    Weight holed = sigma.restrict_to({root_iv}).restrict_complement(K.interval());
    double P = poisson_integral(holed, K.interval());
    double len = K.length();
    best = std::max(best, P * P / (sig * len * len) * tent);
  }
  return std::sqrt(best);
}

double evaluate_stopping_form(const PairCollection& pc, const HaarExpansion& f_exp,
                              const HaarExpansion& g_exp, const TruncationSpec& spec,
                              const QuadratureBudget& budget) {
  const Weight& sigma = f_exp.weight();
  const Weight& w = g_exp.weight();
  Interval root_iv = pc.root.interval();
  double total = 0.0;
  for (const auto& p : pc.pairs) {
    double fhat = f_exp.coefficient(p.outer);
    double ghat = g_exp.coefficient(p.inner);
    if (fhat == 0.0 || ghat == 0.0) continue;
    DyadicInterval tilde = p.outer.child_toward(p.inner);
    HaarFunction hf = haar_function(sigma, p.outer);
    double e_val = hf.eval(tilde.interval().mid());  // E_{tilde} of h_{Q1}
    Weight arg = sigma.restrict_to({root_iv}).restrict_complement(tilde.interval());
    if (arg.atoms().empty() && arg.pieces().empty()) continue;
    HaarFunction hg = haar_function(w, p.inner);
    if (hg.degenerate) continue;
    auto integrand = [&](double x) {
      return hg.eval(x) * truncated_hilbert(arg, nullptr, x, spec, budget);
    };
    double inner = w.integrate(integrand, p.inner.interval(), budget);
    total += fhat * e_val * ghat * inner;
  }
  return total;
}

UpperHalfPlaneMeasure build_upper_half_plane_measure(
    const std::vector<DyadicInterval>& F, const std::vector<std::vector<DyadicInterval>>& J_of_F,
    const Weight& w) {
  require(F.size() == J_of_F.size(), Err::PreconditionViolated,
          "need one interval collection per tree element");
  UpperHalfPlaneMeasure mu;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto& js = J_of_F[i];
    for (const auto& J : js) {
      bool maximal = true;
      for (const auto& other : js)
        if (!(other == J) && other.contains(J)) {
          maximal = false;
          break;
        }
      if (!maximal) continue;
      double len = J.length();
      double mass = 0.0;
      for (const auto& Jp : js)
        if (J.contains(Jp)) {
          double c = haar_x_coeff(w, Jp);
          mass += c * c / (len * len);
        }
      if (mass > 0.0) mu.points.push_back({J.interval().mid(), len, mass});
    }
  }
  mu.validate();
  return mu;
}

}  // namespace tw
