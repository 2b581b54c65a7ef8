#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tw/acceptance.hpp"
#include "tw/cantor.hpp"
#include "tw/constants.hpp"
#include "tw/grid.hpp"
#include "tw/haar.hpp"
#include "tw/report.hpp"

namespace py = pybind11;
using namespace tw;

namespace {

Weight weight_from_parts(const std::vector<std::pair<double, double>>& atoms,
                         const std::vector<std::tuple<double, double, std::vector<double>>>& pieces,
                         const std::string& label) {
  std::vector<Atom> as;
  for (const auto& [pos, mass] : atoms) as.push_back({pos, mass, std::nullopt});
  std::vector<DensityPiece> ps;
  for (const auto& [lo, hi, coef] : pieces) {
    DensityPiece p;
    p.iv = Interval(lo, hi);
    for (std::size_t i = 0; i < coef.size() && i < 4; ++i) p.coef[i] = coef[i];
    ps.push_back(p);
  }
  return Weight(std::move(as), std::move(ps), label);
}

}  // namespace

PYBIND11_MODULE(_twoweight, m) {
  m.doc() = "Two-weight Hilbert transform diagnostics: truncated singular "
            "integrals, Poisson averages, weighted Haar analysis, and the "
            "Cantor-measure example pipeline.";

  py::register_exception<Error>(m, "TwError");

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>())
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def("length", &Interval::length)
      .def("mid", &Interval::mid)
      .def("dist", &Interval::dist)
      .def("__repr__", [](const Interval& I) {
        return "Interval(" + std::to_string(I.lo) + ", " + std::to_string(I.hi) + ")";
      });

  py::class_<Weight>(m, "Weight")
      .def(py::init(&weight_from_parts), py::arg("atoms") = std::vector<std::pair<double, double>>{},
           py::arg("pieces") = std::vector<std::tuple<double, double, std::vector<double>>>{},
           py::arg("label") = "")
      .def_static("point_mass",
                  [](double pos, double mass) { return Weight::point_mass(pos, mass); })
      .def_static("lebesgue", [](double a, double b) { return Weight::lebesgue(a, b); })
      .def("mass",
           [](const Weight& w, const Interval& I, bool cl, bool cr) { return w.mass(I, cl, cr); },
           py::arg("interval"), py::arg("closed_left") = true, py::arg("closed_right") = true)
      .def("integrate",
           [](const Weight& w, const std::function<double(double)>& f, const Interval& I) {
             return w.integrate(f, I);
           })
      .def("first_moment",
           [](const Weight& w, const Interval& I) {
             Moments mm = w.first_moment(I);
             return std::make_pair(mm.mean, mm.centered_second);
           })
      .def("restrict_to",
           [](const Weight& w, const std::vector<Interval>& keep) { return w.restrict_to(keep); })
      .def("to_json", &Weight::to_json)
      .def_static("from_json", &Weight::from_json)
      .def_property_readonly("label", &Weight::label);

  py::class_<TruncationSpec>(m, "TruncationSpec")
      .def(py::init([](double alpha, double beta, bool smooth) {
             return TruncationSpec(alpha, beta, smooth ? TruncMode::Smooth : TruncMode::Hard);
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("smooth") = false)
      .def_readonly("alpha", &TruncationSpec::alpha)
      .def_readonly("beta", &TruncationSpec::beta);

  m.def("smooth_kernel", &smooth_kernel);
  m.def("truncated_hilbert",
        [](const Weight& w, double x, const TruncationSpec& spec) {
          return truncated_hilbert(w, nullptr, x, spec);
        },
        py::arg("weight"), py::arg("x"), py::arg("spec"));
  m.def("poisson_integral",
        [](const Weight& w, const Interval& I) { return poisson_integral(w, I); });
  m.def("poisson_extension",
        [](const Weight& w, double x, double t) { return poisson_extension(w, nullptr, x, t); });
  m.def("averaging_op", [](const Weight& w, double x, double alpha) {
    return averaging_op(w, nullptr, x, alpha);
  });

  py::class_<UhpPoint>(m, "UhpPoint")
      .def(py::init([](double x, double t, double mass) {
        UhpPoint p;
        p.x = x;
        p.t = t;
        p.mass = mass;
        return p;
      }))
      .def_readonly("x", &UhpPoint::x)
      .def_readonly("t", &UhpPoint::t)
      .def_readonly("mass", &UhpPoint::mass);

  py::class_<UpperHalfPlaneMeasure>(m, "UpperHalfPlaneMeasure")
      .def(py::init([](const std::vector<std::tuple<double, double, double>>& pts) {
        UpperHalfPlaneMeasure mu;
        for (const auto& [x, t, mass] : pts) mu.points.push_back({x, t, mass});
        mu.validate();
        return mu;
      }))
      .def("total_mass", &UpperHalfPlaneMeasure::total_mass)
      .def("__len__", [](const UpperHalfPlaneMeasure& mu) { return mu.points.size(); });

  m.def("dual_poisson", [](const UpperHalfPlaneMeasure& mu, double x) {
    return dual_poisson(mu, x);
  });

  m.def("kernel_gradient_check", [](double x, double xp, double y, const TruncationSpec& spec) {
    auto r = kernel_gradient_check(x, xp, y, spec);
    return std::make_pair(r.C, r.in_exact_band);
  });

  m.def("energy_variance_form", &energy_variance_form);

  m.def("hardy_constant_and_norm", [](const Weight& sigma, const Weight& what) {
    HardyResult hr = hardy_constant_and_norm(sigma, what);
    return std::make_pair(hr.B, hr.N);
  });

  m.def("weak_boundedness_constant",
        [](const Weight& sigma, const Weight& w, double a) {
          return weak_boundedness_constant(sigma, w, a);
        });

  m.def("estimate_bad_probability", [](double eps, int r, int trials, uint64_t seed) {
    BadProbEstimate est = estimate_bad_probability(GoodnessParams(eps, r), trials, seed);
    return std::make_pair(est.estimate, est.stderr_);
  });

  m.def("cantor_weight", &cantor_weight);
  m.def("cantor_dimension", &cantor_dimension);
  m.def("hilbert_of_cantor",
        [](int n, double x) {
          HilbertValue hv = hilbert_of_cantor(n, x);
          return std::make_pair(hv.value, hv.error_bound);
        });
  m.def("build_sigma_pair", [](int n, double tol) {
    SigmaPair p = build_sigma_pair(n, tol);
    py::dict d;
    d["sigma"] = p.sigma;
    d["sigma_prime"] = p.sigma_prime;
    py::list gaps;
    for (const auto& cg : p.gaps) {
      py::dict gd;
      gd["lo"] = cg.gap.lo;
      gd["hi"] = cg.gap.hi;
      gd["level"] = cg.level;
      gd["z"] = cg.points.z;
      gd["z_prime"] = cg.points.z_prime;
      gd["mass"] = cg.mass;
      gaps.append(gd);
    }
    d["gaps"] = gaps;
    return d;
  }, py::arg("n"), py::arg("tol") = 1e-12);

  m.def("run_acceptance", [](uint64_t seed) {
    py::list out;
    for (const auto& r : run_acceptance(seed, false)) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      d["seconds"] = r.seconds;
      out.append(d);
    }
    return out;
  }, py::arg("seed") = 20240901);
}
