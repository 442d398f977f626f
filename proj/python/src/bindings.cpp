#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kempner/asymptotics.hpp"
#include "kempner/cli.hpp"
#include "kempner/engine.hpp"
#include "kempner/errors.hpp"
#include "kempner/measure.hpp"
#include "kempner/moments.hpp"
#include "kempner/render.hpp"
#include "kempner/specfun.hpp"

namespace py = pybind11;
using namespace kempner;

namespace {

py::object fraction(const BigRational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

py::list fractions(const std::vector<BigRational>& values) {
  py::list out;
  for (const auto& v : values) out.append(fraction(v));
  return out;
}

BigRational to_rational(py::handle tol) {
  if (py::isinstance<py::float_>(tol)) return BigRational(tol.cast<double>());
  py::object f = py::module_::import("fractions").attr("Fraction")(tol);
  return make_ratio(BigInteger(py::str(f.attr("numerator")).cast<std::string>()),
                    BigInteger(py::str(f.attr("denominator")).cast<std::string>()));
}

py::dict ball_dict(const Ball& b, int digits) {
  py::dict d;
  d["value"] = certified_decimal(b, digits);
  d["radius"] = radius_string(b);
  d["mid"] = b.mid_double();
  d["lower"] = b.lower().to_double();
  d["upper"] = b.upper().to_double();
  return d;
}

py::dict result_dict(const KempnerResult& r, int digits) {
  py::dict d = ball_dict(r.value, digits);
  d["b"] = r.spec.base();
  d["E"] = r.spec.excluded();
  d["terms"] = r.terms_used;
  d["method"] = to_string(r.method);
  return d;
}

SeriesOptions options(std::size_t term_cap, bool allow_slow) {
  SeriesOptions o;
  o.term_cap = term_cap;
  o.allow_slow = allow_slow;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kempner sums with certified error bounds";

  auto base_error = py::register_exception<Error>(m, "KempnerError");
  py::register_exception<InvalidProblem>(m, "InvalidProblem", PyExc_ValueError);
  py::register_exception<ConvergenceTooSlow>(m, "ConvergenceTooSlow", base_error.ptr());
  py::register_exception<InconclusiveOrder>(m, "InconclusiveOrder", base_error.ptr());

  py::class_<ProblemSpec>(m, "Problem")
      .def(py::init([](long long b, std::vector<long long> e) { return make_problem(b, std::move(e)); }),
           py::arg("base"), py::arg("excluded"))
      .def_property_readonly("base", &ProblemSpec::base)
      .def_property_readonly("excluded", &ProblemSpec::excluded)
      .def_property_readonly("admissible", &ProblemSpec::admissible)
      .def_property_readonly("shifts", &ProblemSpec::shifts)
      .def_property_readonly("degenerate", &ProblemSpec::is_degenerate)
      .def("__eq__", [](const ProblemSpec& a, const ProblemSpec& b) { return a == b; })
      .def("__repr__", [](const ProblemSpec& s) {
        return "Problem(base=" + std::to_string(s.base()) + ", excluded=" + s.excluded_string() + ")";
      });

  m.def("problems_with_cardinality", &all_problems_with_cardinality, py::arg("base"), py::arg("cardinality"));

  m.def(
      "moments",
      [](const ProblemSpec& s, long long shift, std::size_t order, const std::string& method) {
        if (method == "alternate") return fractions(moment_table_alt(s, shift, order).values);
        if (method == "special") {
          if (s.excluded() != std::vector<int>{s.base() - 1} || shift != 1) {
            throw UnsupportedExcludedSet("the special relation needs E = {b-1} and shift 1");
          }
          return fractions(special_c_table(s.base(), order).values);
        }
        if (method != "primary") throw DomainError("unknown method " + method);
        return fractions(moment_table(s, shift, order).values);
      },
      py::arg("problem"), py::arg("shift"), py::arg("order"), py::arg("method") = "primary",
      "Exact shifted moments v_0 .. v_order as Fractions.");

  m.def(
      "closed_form_low_moments",
      [](const ProblemSpec& s) {
        auto p = closed_form_low_moments(s);
        return py::make_tuple(fraction(p.first), fraction(p.second));
      },
      py::arg("problem"));

  m.def(
      "kempner",
      [](const ProblemSpec& s, py::handle tol, const std::string& method, int digits, std::size_t term_cap,
         bool allow_slow) {
        const BigRational t = to_rational(tol);
        const SeriesOptions o = options(term_cap, allow_slow);
        if (method != "series" && method != "via_U") throw DomainError("method must be series or via_U");
        const KempnerResult r = [&] {
          py::gil_scoped_release release;
          return method == "via_U" ? kempner_via_U(s, t, o) : kempner_series(s, t, o);
        }();
        return result_dict(r, digits);
      },
      py::arg("problem"), py::arg("tol") = 1e-15, py::arg("method") = "series", py::arg("digits") = 30,
      py::arg("term_cap") = kDefaultTermCap, py::arg("allow_slow") = false,
      "K(b,E) as a dict with certified decimal 'value', 'radius', float bounds and metadata.");

  m.def(
      "bounds",
      [](const ProblemSpec& s, int digits) {
        const KempnerBounds kb = kempner_bounds(s, Precision{digits + 5});
        py::list per_digit;
        for (const auto& d : kb.digits) {
          py::dict row;
          row["digit"] = d.digit;
          row["lo"] = d.lo.lower().to_double();
          row["hi"] = d.hi.upper().to_double();
          per_digit.append(row);
        }
        py::dict out;
        out["digits"] = per_digit;
        out["lo"] = kb.lo_total.lower().to_double();
        out["hi"] = kb.hi_total.upper().to_double();
        return out;
      },
      py::arg("problem"), py::arg("digits") = 20);

  m.def(
      "stieltjes_U",
      [](const ProblemSpec& s, long long n, py::handle tol) {
        return ball_dict(stieltjes_U(s, n, to_rational(tol)), 30);
      },
      py::arg("problem"), py::arg("n"), py::arg("tol") = 1e-15);

  m.def(
      "oracle",
      [](const ProblemSpec& s, int length, const std::string& formula, std::uint64_t budget) {
        const TruncatedMeasure tm = build_truncated_measure(s, length, budget);
        const OracleValue v = formula == "digamma" ? oracle_theorem_main(tm, Precision{20})
                                                   : oracle_K_loglike(tm, Precision{20});
        py::dict d = ball_dict(v.value, 20);
        d["error_bound"] = fraction(v.error_bound);
        return d;
      },
      py::arg("problem"), py::arg("length"), py::arg("formula") = "loglike",
      py::arg("budget") = kDefaultAtomBudget);

  m.def(
      "expansion",
      [](const std::string& family, int b, int digit) {
        ExpansionResult e = family == "zero"  ? expansion_zero_excluded(b)
                            : family == "top" ? expansion_top_excluded(b)
                            : family == "single"
                                ? expansion_single_digit(b, digit)
                                : throw DomainError("family must be zero, top or single");
        py::dict d = ball_dict(e.partial, 25);
        d["remainder_order"] = e.remainder_order;
        return d;
      },
      py::arg("family"), py::arg("base"), py::arg("digit") = 1);

  m.def(
      "fit_decay_order",
      [](const std::vector<std::tuple<double, double, double>>& samples) {
        std::vector<DecaySample> s;
        for (const auto& [b, defect, radius] : samples) s.push_back({b, defect, radius});
        const DecayFit f = fit_decay_order(s);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residuals"] = f.residuals;
        d["decaying"] = f.decaying;
        return d;
      },
      py::arg("samples"), "Least-squares decay exponent from (b, defect, radius) triples.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line interface, returning (exit_code, stdout, stderr).");
}
