#include "tw/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace tw {

double DensityPiece::eval(double x) const {
  if (kind == PieceKind::XOverLogSq) {
    if (x <= 0.0) return 0.0;
    double l = std::log(x);
    return x / (l * l);
  }
  return coef[0] + x * (coef[1] + x * (coef[2] + x * coef[3]));
}

// ---------------------------------------------------------------------------
// quadrature

namespace {

// G7,K15 nodes/weights on [-1,1] (abscissa, Gauss weight, Kronrod weight).
constexpr double kNW[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

QuadResult g7k15(const Func& f, double a, double b) {
  const double x0 = 0.5 * (a + b);
  const double m = 0.5 * (b - a);
  double y0 = f(x0);
  double g7 = kNW[0][1] * y0;
  double k15 = kNW[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    double dx = m * kNW[i][0];
    double yi = f(x0 + dx) + f(x0 - dx);
    g7 += kNW[i][1] * yi;
    k15 += kNW[i][2] * yi;
  }
  g7 *= m;
  k15 *= m;
  double err = std::abs(g7 - k15);
  err = 200.0 * err * std::sqrt(std::max(err, 0.0));
  return {k15, std::max(err, std::abs(k15) * 1e-15)};
}

}  // namespace

QuadResult adaptive_quadrature(const Func& f, double a, double b, const QuadratureBudget& budget) {
  if (a >= b) return {0.0, 0.0};
  struct Panel {
    double a, b;
    QuadResult q;
  };
  std::vector<Panel> stack{{a, b, g7k15(f, a, b)}};
  double value = 0.0, error = 0.0;
  int used = 0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double tol = std::max(budget.abs_tol * (p.b - p.a) / (b - a),
                          budget.rel_tol * std::abs(p.q.value));
    if (p.q.error <= tol || (p.b - p.a) < 1e-15 * std::max(std::abs(p.a), 1.0)) {
      value += p.q.value;
      error += p.q.error;
      continue;
    }
    if (++used > budget.max_subdivisions)
      fail(Err::BudgetExceeded, "adaptive quadrature exceeded max_subdivisions");
    double mid = 0.5 * (p.a + p.b);
    stack.push_back({p.a, mid, g7k15(f, p.a, mid)});
    stack.push_back({mid, p.b, g7k15(f, mid, p.b)});
  }
  return {value, error};
}

double poly_integral(const std::array<double, 4>& c, double u, double v) {
  auto F = [&](double x) {
    return x * (c[0] + x * (c[1] / 2 + x * (c[2] / 3 + x * c[3] / 4)));
  };
  return F(v) - F(u);
}

double poly_moment_integral(const std::array<double, 4>& c, int k, double u, double v) {
  // ∫ x^k p(x) dx: shift coefficient array by k.
  std::array<double, 7> cc{};
  for (int i = 0; i < 4; ++i) cc[i + k] = c[i];
  auto F = [&](double x) {
    double acc = 0.0;
    for (int i = 6; i >= 0; --i) acc = acc * x + cc[i] / (i + 1);
    return acc * x;
  };
  return F(v) - F(u);
}

double poly_against_poisson_kernel(const std::array<double, 4>& c, double u, double v, double A,
                                   double cpt, int sign) {
  // s(x) = A + sign*(x - cpt) with s > 0 on [u,v]; integrate p(x)*A/s^2.
  // Rewrite p in powers of s: x = cpt + sign*(s - A).
  double su = A + sign * (u - cpt), sv = A + sign * (v - cpt);
  require(su > 0 && sv > 0, Err::Internal, "poisson kernel zone error");
  double s1 = std::min(su, sv), s2 = std::max(su, sv);
  // p(x) = sum_k c_k (cpt + sign*(s-A))^k = sum_j d_j s^j
  double base = cpt - sign * A;  // x = base + sign*s
  std::array<double, 4> d{};
  // expand c3 x^3 + ... with x = base + sign*s using Horner on the shifted variable
  // d = c composed with (base + sign*s): synthetic expansion
  for (int k = 3; k >= 0; --k) {
    // multiply d by (base + sign*s) then add c[k]
    std::array<double, 4> nd{};
    for (int j = 0; j < 3; ++j) nd[j + 1] += d[j] * sign;
    for (int j = 0; j < 4; ++j) nd[j] += d[j] * base;
    nd[0] += c[k];
    d = nd;
  }
  // ∫ A * sum_j d_j s^{j-2} ds over [s1,s2] (ds = sign*dx; zone orientation
  // already folded into s1<s2 with positive contribution).
  double ds = s2 - s1;
  double t0 = d[0] * (ds / (s1 * s2));                    // ∫ s^-2 = -1/s
  double t1 = d[1] * std::log1p(ds / s1);                 // ∫ s^-1 = ln s
  double t2 = d[2] * ds;                                  // ∫ 1
  double t3 = d[3] * 0.5 * ds * (s1 + s2);                // ∫ s
  return A * (t0 + t1 + t2 + t3);
}

double poly_against_cauchy_kernel(const std::array<double, 4>& c, double u, double v, double x) {
  // p(y)/(y-x) = q(y) + p(x)/(y-x) with q = (p(y)-p(x))/(y-x); exact.
  // q coefficients by synthetic division of p by (y - x):
  double q2 = c[3];
  double q1 = c[2] + x * q2;
  double q0 = c[1] + x * q1;
  double px = c[0] + x * q0;
  std::array<double, 4> q{q0, q1, q2, 0.0};
  double qint = poly_integral(q, u, v);
  // log term: both endpoints on same side of x
  double lu = u - x, lv = v - x;
  require(lu * lv > 0.0, Err::SingularEvaluation, "cauchy kernel across singularity");
  return qint + px * std::log1p((lv - lu) / lu);
}

// ---------------------------------------------------------------------------
// Weight

Weight::Weight(std::vector<Atom> atoms, std::vector<DensityPiece> pieces, std::string label)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), label_(std::move(label)) {
  validate();
}

void Weight::validate() const {
  for (const auto& a : atoms_) {
    require(a.mass > 0.0, Err::PreconditionViolated, "atom mass must be positive");
    require(std::isfinite(a.pos), Err::PreconditionViolated, "atom position must be finite");
  }
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.kind == PieceKind::Poly || p.kind == PieceKind::XOverLogSq)
      require(std::isfinite(p.iv.lo) && std::isfinite(p.iv.hi) && p.iv.lo < p.iv.hi,
              Err::PreconditionViolated, "bounded piece needs finite lo < hi");
    for (size_t j = i + 1; j < pieces_.size(); ++j)
      require(!(pieces_[i].iv.lo < pieces_[j].iv.hi && pieces_[j].iv.lo < pieces_[i].iv.hi),
              Err::PreconditionViolated, "density pieces must have disjoint interiors");
    if (p.kind == PieceKind::Poly) {
      // nonnegativity at endpoints and interior critical points
      auto val = [&](double x) { return p.eval(x); };
      const double tol = -1e-12;
      require(val(p.iv.lo) >= tol && val(p.iv.hi) >= tol, Err::PreconditionViolated,
              "density negative at piece endpoint");
      // critical points of cubic: roots of derivative c1 + 2 c2 x + 3 c3 x^2
      double a = 3 * p.coef[3], b = 2 * p.coef[2], c = p.coef[1];
      if (a == 0.0) {
        if (b != 0.0) {
          double x = -c / b;
          if (x > p.iv.lo && x < p.iv.hi)
            require(val(x) >= tol, Err::PreconditionViolated, "density negative at extremum");
        }
      } else {
        double disc = b * b - 4 * a * c;
        if (disc >= 0) {
          for (double s : {-1.0, 1.0}) {
            double x = (-b + s * std::sqrt(disc)) / (2 * a);
            if (x > p.iv.lo && x < p.iv.hi)
              require(val(x) >= tol, Err::PreconditionViolated, "density negative at extremum");
          }
        }
      }
    }
  }
}

Weight Weight::point_mass(double pos, double mass, std::optional<Rat> exact) {
  Atom a;
  a.pos = pos;
  a.mass = mass;
  a.pos_exact = exact;
  return Weight({a}, {}, "point-mass");
}

Weight Weight::from_atoms(std::vector<Atom> atoms, std::string label) {
  return Weight(std::move(atoms), {}, std::move(label));
}

Weight Weight::lebesgue(double a, double b, std::string label) {
  DensityPiece p;
  p.iv = Interval(a, b);
  p.coef = {1.0, 0.0, 0.0, 0.0};
  return Weight({}, {p}, std::move(label));
}

Weight Weight::density(Interval iv, std::array<double, 4> coef, std::string label) {
  DensityPiece p;
  p.iv = iv;
  p.coef = coef;
  return Weight({}, {p}, std::move(label));
}

bool Weight::has_unbounded_support() const {
  for (const auto& p : pieces_)
    if (p.kind == PieceKind::TailLeft || p.kind == PieceKind::TailRight) return true;
  return false;
}

double Weight::total_atom_mass() const {
  double s = 0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

namespace {
// Overlap of a piece with a query interval; empty -> lo >= hi. Exact
// endpoints are propagated from whichever side wins the comparison.
Interval piece_overlap(const DensityPiece& p, const Interval& I) {
  Interval r;
  bool take_piece_lo = p.iv.lo >= I.lo;
  bool take_piece_hi = p.iv.hi <= I.hi;
  switch (p.kind) {
    case PieceKind::TailRight:
      take_piece_hi = false;
      break;
    case PieceKind::TailLeft:
      take_piece_lo = false;
      break;
    default:
      break;
  }
  r.lo = take_piece_lo ? p.iv.lo : I.lo;
  r.lo_exact = take_piece_lo ? p.iv.lo_exact : I.lo_exact;
  r.hi = take_piece_hi ? p.iv.hi : I.hi;
  r.hi_exact = take_piece_hi ? p.iv.hi_exact : I.hi_exact;
  return r;
}
}  // namespace

double Weight::mass(const Interval& I, bool closed_left, bool closed_right) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (I.contains(a.pos, closed_left, closed_right)) s += a.mass;
  for (const auto& p : pieces_) {
    Interval o = piece_overlap(p, I);
    if (o.lo >= o.hi) continue;
    if (p.kind == PieceKind::XOverLogSq) {
      auto f = [&p](double x) { return p.eval(x); };
      s += adaptive_quadrature(f, o.lo, o.hi, {}).value;
    } else if (p.degree() == 0) {
      s += p.coef[0] * o.length();  // exact width when endpoints are exact
    } else {
      s += poly_integral(p.coef, o.lo, o.hi);
    }
  }
  return s;
}

double Weight::integrate(const Func& f, const Interval& I, const QuadratureBudget& budget) const {
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (!I.contains(a.pos)) continue;
    double v = f(a.pos);
    require(std::isfinite(v), Err::SingularEvaluation, "integrand not finite at atom");
    s += v * a.mass;
  }
  for (const auto& p : pieces_) {
    Interval o = piece_overlap(p, I);
    if (o.lo >= o.hi) continue;
    auto g = [&](double x) { return f(x) * p.eval(x); };
    s += adaptive_quadrature(g, o.lo, o.hi, budget).value;
  }
  return s;
}

Weight Weight::restrict_to(const std::vector<Interval>& keep, bool closed_left,
                           bool closed_right) const {
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = i + 1; j < keep.size(); ++j)
      require(!keep[i].overlaps_interior(keep[j]), Err::OverlappingKeepSet,
              "keep intervals overlap");
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;
  for (const auto& a : atoms_)
    for (const auto& I : keep)
      if (I.contains(a.pos, closed_left, closed_right)) {
        atoms.push_back(a);
        break;
      }
  for (const auto& p : pieces_)
    for (const auto& I : keep) {
      Interval o = piece_overlap(p, I);
      if (o.lo >= o.hi) continue;
      DensityPiece q = p;
      q.iv = Interval(o.lo, o.hi);
      if (q.kind == PieceKind::TailLeft || q.kind == PieceKind::TailRight)
        q.kind = PieceKind::Poly;
      pieces.push_back(q);
    }
  return Weight(std::move(atoms), std::move(pieces), label_ + "|restricted");
}

Weight Weight::restrict_complement(const Interval& hole) const {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;
  for (const auto& a : atoms_)
    if (!(a.pos > hole.lo && a.pos < hole.hi)) atoms.push_back(a);
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) {
    double plo = p.kind == PieceKind::TailLeft ? -inf : p.iv.lo;
    double phi = p.kind == PieceKind::TailRight ? inf : p.iv.hi;
    if (plo < hole.lo) {  // left fragment (plo, min(phi, hole.lo))
      DensityPiece q = p;
      double newhi = std::min(phi, hole.lo);
      if (std::isfinite(plo)) {
        q.iv = Interval(plo, newhi);
        if (q.kind == PieceKind::TailRight) q.kind = PieceKind::Poly;
      } else {
        q.iv.lo = newhi - 1.0;  // unused side of a TailLeft
        q.iv.hi = newhi;
      }
      pieces.push_back(q);
    }
    if (phi > hole.hi) {  // right fragment (max(plo, hole.hi), phi)
      DensityPiece q = p;
      double newlo = std::max(plo, hole.hi);
      if (std::isfinite(phi)) {
        q.iv = Interval(newlo, phi);
        if (q.kind == PieceKind::TailLeft) q.kind = PieceKind::Poly;
      } else {
        q.iv.lo = newlo;
        q.iv.hi = newlo + 1.0;  // unused side of a TailRight
      }
      pieces.push_back(q);
    }
  }
  return Weight(std::move(atoms), std::move(pieces), label_ + "|holed");
}

Moments Weight::first_moment(const Interval& I) const {
  double m = mass(I);
  require(m > 0.0, Err::ZeroMass, "first_moment on zero-mass interval");
  double first = 0.0;
  int atom_hits = 0;
  const Atom* last_hit = nullptr;
  for (const auto& a : atoms_)
    if (I.contains(a.pos)) {
      first += a.pos * a.mass;
      ++atom_hits;
      last_hit = &a;
    }
  bool atoms_only = true;
  for (const auto& p : pieces_) {
    Interval o = piece_overlap(p, I);
    if (o.lo < o.hi) atoms_only = false;
  }
  if (atoms_only && atom_hits == 1)  // a lone point mass has zero spread, exactly
    return {last_hit->pos, 0.0};
  for (const auto& p : pieces_) {
    Interval o = piece_overlap(p, I);
    if (o.lo >= o.hi) continue;
    if (p.kind == PieceKind::XOverLogSq) {
      auto f = [&p](double x) { return x * p.eval(x); };
      first += adaptive_quadrature(f, o.lo, o.hi, {}).value;
    } else {
      first += poly_moment_integral(p.coef, 1, o.lo, o.hi);
    }
  }
  double mean = first / m;
  double cs = 0.0;
  for (const auto& a : atoms_)
    if (I.contains(a.pos)) cs += a.mass * (a.pos - mean) * (a.pos - mean);
  for (const auto& p : pieces_) {
    Interval o = piece_overlap(p, I);
    if (o.lo >= o.hi) continue;
    if (p.kind == PieceKind::XOverLogSq) {
      auto f = [&p, mean](double x) { return (x - mean) * (x - mean) * p.eval(x); };
      cs += adaptive_quadrature(f, o.lo, o.hi, {}).value;
    } else {
      // ∫ (x-mean)^2 p = ∫x^2 p - 2 mean ∫x p + mean^2 ∫p, each exact
      double i0 = poly_integral(p.coef, o.lo, o.hi);
      double i1 = poly_moment_integral(p.coef, 1, o.lo, o.hi);
      double i2 = poly_moment_integral(p.coef, 2, o.lo, o.hi);
      cs += i2 - 2 * mean * i1 + mean * mean * i0;
    }
  }
  return {mean, std::max(cs, 0.0)};
}

Interval Weight::support_bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) {
    lo = std::min(lo, a.pos);
    hi = std::max(hi, a.pos);
  }
  for (const auto& p : pieces_) {
    lo = std::min(lo, p.kind == PieceKind::TailLeft ? -std::numeric_limits<double>::infinity()
                                                    : p.iv.lo);
    hi = std::max(hi, p.kind == PieceKind::TailRight ? std::numeric_limits<double>::infinity()
                                                     : p.iv.hi);
  }
  Interval r;
  r.lo = lo;
  r.hi = hi;
  return r;
}

// ---------------------------------------------------------------------------
// serialization

namespace {
nlohmann::json rat_json(const Rat& r) { return {{"num", r.num}, {"den", r.den}}; }
std::optional<Rat> rat_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return Rat(j[key]["num"].get<long long>(), j[key]["den"].get<long long>());
}
const char* kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::Poly: return "poly";
    case PieceKind::TailRight: return "tail_right";
    case PieceKind::TailLeft: return "tail_left";
    case PieceKind::XOverLogSq: return "x_over_log_sq";
  }
  return "poly";
}
PieceKind kind_from(const std::string& s) {
  if (s == "tail_right") return PieceKind::TailRight;
  if (s == "tail_left") return PieceKind::TailLeft;
  if (s == "x_over_log_sq") return PieceKind::XOverLogSq;
  return PieceKind::Poly;
}
}  // namespace

std::string Weight::to_json() const {
  nlohmann::json j;
  j["label"] = label_;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms_) {
    nlohmann::json ja{{"pos", a.pos}, {"mass", a.mass}};
    if (a.pos_exact) ja["pos_exact"] = rat_json(*a.pos_exact);
    j["atoms"].push_back(ja);
  }
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_) {
    nlohmann::json jp{{"lo", p.iv.lo}, {"hi", p.iv.hi}, {"kind", kind_name(p.kind)},
                      {"coef", p.coef}};
    if (p.iv.lo_exact) jp["lo_exact"] = rat_json(*p.iv.lo_exact);
    if (p.iv.hi_exact) jp["hi_exact"] = rat_json(*p.iv.hi_exact);
    j["pieces"].push_back(jp);
  }
  return j.dump(2);
}

Weight Weight::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Atom> atoms;
  for (const auto& ja : j.value("atoms", nlohmann::json::array())) {
    Atom a;
    a.pos = ja["pos"].get<double>();
    a.mass = ja["mass"].get<double>();
    a.pos_exact = rat_from(ja, "pos_exact");
    atoms.push_back(a);
  }
  std::vector<DensityPiece> pieces;
  for (const auto& jp : j.value("pieces", nlohmann::json::array())) {
    DensityPiece p;
    p.iv.lo = jp["lo"].get<double>();
    p.iv.hi = jp["hi"].get<double>();
    p.iv.lo_exact = rat_from(jp, "lo_exact");
    p.iv.hi_exact = rat_from(jp, "hi_exact");
    p.kind = kind_from(jp.value("kind", "poly"));
    auto c = jp["coef"];
    for (int i = 0; i < 4; ++i) p.coef[i] = c[i].get<double>();
    pieces.push_back(p);
  }
  return Weight(std::move(atoms), std::move(pieces), j.value("label", ""));
}

}  // namespace tw
