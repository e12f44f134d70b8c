#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pssmp/bessel.hpp"
#include "pssmp/config.hpp"
#include "pssmp/envelope.hpp"
#include "pssmp/lamperti.hpp"
#include "pssmp/levy.hpp"
#include "pssmp/lil.hpp"
#include "pssmp/passage.hpp"
#include "pssmp/rng.hpp"
#include "pssmp/runner.hpp"
#include "pssmp/special.hpp"
#include "pssmp/stats.hpp"

namespace py = pybind11;
using namespace pssmp;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::tuple path_tuple(const PssmpPath& p) { return py::make_tuple(as_array(p.times), as_array(p.values)); }

End parse_end(const std::string& s) {
  if (s == "zero") return End::Zero;
  if (s == "infinity") return End::Infinity;
  throw py::value_error("end must be 'zero' or 'infinity'");
}

KdeForm parse_form(const std::string& s) {
  if (s == "squared") return KdeForm::SquaredGruetShi;
  if (s == "kde") return KdeForm::SquaredKde;
  if (s == "bessel") return KdeForm::BesselKde;
  throw py::value_error("form must be 'squared', 'kde' or 'bessel'");
}

LilCase parse_case(const std::string& s) {
  for (auto c : {LilCase::StableCspProcess, LilCase::StableCspPassage, LilCase::RegvarPassage, LilCase::RegvarProcess,
                 LilCase::SatoPassage, LilCase::SatoProcess, LilCase::BesselPassage, LilCase::BesselProcess,
                 LilCase::Poisson}) {
    if (to_string(c) == s) return c;
  }
  throw py::value_error("unknown LIL case: " + s);
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["outcome"] = to_string(v.kind);
  d["fitted_exponent"] = v.exponent;
  d["exponent_se"] = v.exponent_se;
  d["partial_sums"] = v.partial_sums;
  d["extrapolated_total"] = v.extrapolated_total;
  d["beyond_data"] = v.beyond_data;
  return d;
}

TestFunction make_test(const std::string& name, double c) {
  if (name == "iterated_log") return TestFunction::iterated_log(c);
  if (name == "sqrt_iterated_log") return TestFunction::sqrt_iterated_log(c);
  if (name == "linear") return TestFunction::linear(c);
  if (name == "power") return TestFunction::power(c);
  throw py::value_error("unknown test function: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Positive self-similar Markov processes: Lamperti paths, passage times, integral tests";
  m.attr("__version__") = code_version();

  py::register_exception<InsufficientHorizon>(m, "InsufficientHorizon", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  py::class_<LevyModel>(m, "LevyModel")
      .def_static("brownian_drift", &LevyModel::brownian_drift, py::arg("a"), py::arg("sigma") = 1.0)
      .def_static("stable", &LevyModel::spectrally_negative_stable, py::arg("alpha"))
      .def_static("stable_subordinator", &LevyModel::stable_subordinator, py::arg("alpha"))
      .def_static("poisson", &LevyModel::unit_poisson)
      .def("mean", &LevyModel::mean)
      .def("name", &LevyModel::name)
      .def("laplace_exponent", [](const LevyModel& self, double u) { return laplace_exponent(self, u); })
      .def("__repr__", [](const LevyModel& self) { return "<LevyModel " + self.name() + ">"; });

  m.def("sample_path",
        [](const LevyModel& model, double horizon, double step, std::uint64_t seed) {
          const auto p = sample_path(model, horizon, step, seed);
          return py::make_tuple(as_array(p.times), as_array(p.values));
        },
        py::arg("model"), py::arg("horizon"), py::arg("step"), py::arg("seed"),
        "Levy path on a uniform grid; returns (times, values).");

  m.def("simulate",
        [](const LevyModel& model, double x, double horizon, double step, std::uint64_t seed) {
          return path_tuple(simulate_pssmp(model, x, horizon, step, seed));
        },
        py::arg("model"), py::arg("x"), py::arg("horizon"), py::arg("step"), py::arg("seed"));

  m.def("construct_from_zero",
        [](const LevyModel& model, double horizon, std::uint64_t seed) {
          return path_tuple(construct_from_zero(model, horizon, seed));
        },
        py::arg("model"), py::arg("horizon"), py::arg("seed"));

  m.def("lamperti_roundtrip_error",
        [](const LevyModel& model, double x, double horizon, double step, std::uint64_t seed) {
          const auto xi = sample_path(model, horizon, step, seed);
          const auto back = lamperti_inverse(lamperti_forward(x, xi));
          double e = 0.0;
          for (std::size_t k = 0; k < xi.values.size(); ++k) e = std::max(e, std::abs(back.values[k] - xi.values[k]));
          return e;
        },
        py::arg("model"), py::arg("x"), py::arg("horizon"), py::arg("step"), py::arg("seed"));

  m.def("sample_S_direct",
        [](const LevyModel& model, double y, std::size_t n, std::uint64_t seed) {
          return as_array(sample_S_direct(model, y, n, seed).values);
        },
        py::arg("model"), py::arg("y"), py::arg("n"), py::arg("seed"));
  m.def("sample_U_direct",
        [](const LevyModel& model, double y, std::size_t n, std::uint64_t seed) {
          return as_array(sample_U_direct(model, y, n, seed).values);
        },
        py::arg("model"), py::arg("y"), py::arg("n"), py::arg("seed"));
  m.def("sample_S1_duality",
        [](const LevyModel& model, std::size_t n, std::uint64_t seed, double x0, double tol) {
          DualityOptions o;
          o.x0 = x0;
          return as_array(sample_S1_duality(model, n, tol, seed, o).values);
        },
        py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("x0") = 1e-3, py::arg("tol") = 1e-6);
  m.def("sample_U1_duality",
        [](const LevyModel& model, std::size_t n, std::uint64_t seed, double tol) {
          return as_array(sample_U1_duality(model, n, tol, seed).values);
        },
        py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("tol") = 1e-6);

  m.def("ks_two_sample",
        [](std::vector<double> a, std::vector<double> b) {
          const auto r = ks_two_sample(std::move(a), std::move(b));
          return py::make_tuple(r.statistic, r.p_value);
        },
        py::arg("a"), py::arg("b"), "Two-sample KS test; returns (statistic, p_value).");

  m.def("bessel_I", &bessel_I, py::arg("a"), py::arg("z"));
  m.def("bessel_K", &bessel_K, py::arg("a"), py::arg("z"));
  m.def("laplace_S1", [](double delta, double l) { return laplace_S1(BesqParams{delta}, l); }, py::arg("delta"),
        py::arg("lam"));
  m.def("laplace_U1", [](double delta, double l) { return laplace_U1(BesqParams{delta}, l); }, py::arg("delta"),
        py::arg("lam"));
  m.def("besq_transition",
        [](double delta, double x, double t, std::size_t n, std::uint64_t seed) {
          std::vector<double> out(n);
          for (std::size_t i = 0; i < n; ++i)
            out[i] = besq_transition_sample(BesqParams{delta}, x, t, stream_key(seed, StreamTag::Bessel, i));
          return as_array(out);
        },
        py::arg("delta"), py::arg("x"), py::arg("t"), py::arg("n"), py::arg("seed"));
  m.def("sample_S1_spectral",
        [](double delta, std::size_t n, std::uint64_t seed) {
          return as_array(sample_S1_spectral(BesqParams{delta}, n, seed));
        },
        py::arg("delta"), py::arg("n"), py::arg("seed"));
  m.def("gruet_shi_constant",
        [](double delta, const std::vector<double>& samples, const std::vector<double>& grid) {
          return fit_gruet_shi_constant(BesqParams{delta}, samples, grid).K;
        },
        py::arg("delta"), py::arg("samples"), py::arg("grid"));

  m.def("kde_integral_test",
        [](double delta, double c, const std::string& end, const std::string& form) {
          const auto f = parse_form(form);
          const auto h = f == KdeForm::BesselKde ? TestFunction::sqrt_iterated_log(c) : TestFunction::iterated_log(c);
          return verdict_dict(kde_integral_test(BesqParams{delta}, h, parse_end(end), f));
        },
        py::arg("delta"), py::arg("c"), py::arg("end") = "zero", py::arg("form") = "squared");
  m.def("classify_integral",
        [](std::function<double(double)> tail, const std::string& test, double c, const std::string& end,
           bool upper) {
          const auto F = TailFunction::analytic("python", std::move(tail));
          return verdict_dict(
              classify_integral(F, make_test(test, c), parse_end(end), upper ? TestMode::Upper : TestMode::Lower));
        },
        py::arg("tail"), py::arg("test"), py::arg("c"), py::arg("end") = "zero", py::arg("upper") = true);
  m.def("classify_empirical",
        [](std::vector<double> samples, const std::string& test, double c, const std::string& end) {
          const auto F = TailFunction::empirical(std::move(samples), EmpiricalTail::InverseExponentialFit);
          return verdict_dict(classify_integral(F, make_test(test, c), parse_end(end), TestMode::Upper));
        },
        py::arg("samples"), py::arg("test"), py::arg("c"), py::arg("end") = "zero");

  m.def("lil_constant", [](const std::string& c, double p) { return lil_constant(parse_case(c), p); },
        py::arg("case"), py::arg("param") = 0.0);
  m.def("gauge_loglog_phi", [](double K, double gamma, double t) { return gauge_eval(GaugeSpec::loglog_phi(K, gamma), t); },
        py::arg("K"), py::arg("gamma"), py::arg("t"));
  m.def("gauge_poisson_m", [](double t) { return gauge_eval(GaugeSpec::poisson_m(), t); }, py::arg("t"));
  m.def("gauge_logreg_phi",
        [](double lambda, double delta, double t) {
          return gauge_eval(GaugeSpec::logreg_phi_inverse_exponential(lambda, delta), t);
        },
        py::arg("lam"), py::arg("delta"), py::arg("t"));

  m.def("run_config",
        [](const std::string& text, std::optional<std::string> out_dir) {
          std::istringstream in(text);
          auto spec = parse_config(in);
          if (out_dir) spec.out_dir = *out_dir;
          const auto res = run_experiment(spec);
          return py::make_tuple(res.exit_code, res.exit_code ? res.error.dump() : res.result.dump());
        },
        py::arg("text"), py::arg("out_dir") = py::none(),
        "Run an INI experiment given as text; returns (exit_code, json).");
}
