#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tailbound/bounds.hpp"
#include "tailbound/cli.hpp"
#include "tailbound/dists.hpp"
#include "tailbound/error.hpp"
#include "tailbound/evtfit.hpp"
#include "tailbound/io.hpp"
#include "tailbound/montecarlo.hpp"
#include "tailbound/returns.hpp"

namespace py = pybind11;
using namespace tailbound;

namespace {

DistributionSpec make_spec(const std::string& kind, const py::kwargs& kw) {
  auto get = [&](const char* key, double fallback) {
    return kw.contains(key) ? kw[key].cast<double>() : fallback;
  };
  if (kind == "exponential") return DistributionSpec::exponential(get("rate", 1.0));
  if (kind == "half-normal") {
    if (kw.contains("unit_mean") && kw["unit_mean"].cast<bool>()) {
      return DistributionSpec::half_normal_unit_mean();
    }
    return DistributionSpec::half_normal(get("sigma", 1.0));
  }
  if (kind == "pareto") return DistributionSpec::pareto_i(get("alpha", 0.0), get("mu", 1.0));
  if (kind == "location-pareto") {
    return DistributionSpec::location_pareto(get("alpha", 0.0), get("mu", 0.0), get("delta", 0.0));
  }
  if (kind == "gpd") return DistributionSpec::gpd(get("xi", 0.0), get("beta", 1.0));
  throw InvalidParameter("unknown distribution kind '" + kind + "'");
}

py::dict report_dict(const TailBoundReport& r) {
  py::dict d;
  d["threshold"] = r.threshold;
  d["bound"] = r.bound;
  d["method"] = std::string(to_string(r.method));
  d["n"] = r.n;
  d["sample_max"] = r.sample_max;
  d["k"] = r.k;
  d["a"] = r.a;
  d["below_maximum"] = r.below_maximum;
  return d;
}

py::dict fit_dict(const GpdFit& f) {
  py::dict d;
  d["mu"] = f.mu;
  d["xi"] = f.xi;
  d["beta"] = f.beta;
  d["alpha"] = f.alpha;
  d["n_exceed"] = f.n_exceed;
  d["loglik"] = f.loglik;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tail probability bounds from the sample maximum";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfiniteMoment>(m, "InfiniteMoment", PyExc_ArithmeticError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<DistributionSpec>(m, "Distribution")
      .def(py::init(&make_spec), py::arg("kind"))
      .def_property_readonly("kind", [](const DistributionSpec& s) { return std::string(to_string(s.kind())); })
      .def("__repr__", &DistributionSpec::describe)
      .def("pdf", [](const DistributionSpec& s, double x) { return pdf(s, x); })
      .def("cdf", [](const DistributionSpec& s, double x) { return cdf(s, x); })
      .def("tail", [](const DistributionSpec& s, double x) { return tail(s, x); })
      .def("quantile", [](const DistributionSpec& s, double p) { return quantile(s, p); })
      .def("mean", [](const DistributionSpec& s) { return mean(s); })
      .def("moment", [](const DistributionSpec& s, int k) { return moment(s, k); })
      .def("partial_expectation",
           [](const DistributionSpec& s, double nu) { return partial_expectation(s, nu); })
      .def("improved_markov_bound",
           [](const DistributionSpec& s, double nu) { return improved_markov_bound(s, nu); })
      .def("traditional_markov_bound",
           [](const DistributionSpec& s, double nu) { return traditional_markov_bound(s, nu); })
      .def("markov_error", [](const DistributionSpec& s, double nu) { return markov_error(s, nu); })
      .def("sample", [](const DistributionSpec& s, std::size_t n, std::uint64_t seed) {
        return sample(s, n, seed);
      }, py::arg("n"), py::arg("seed") = kDefaultSeed);

  m.def("empirical_bound", [](std::vector<double> x, double nu) {
    return report_dict(empirical_bound(SortedSample(std::move(x)), nu));
  });
  m.def("scaled_bound", [](std::vector<double> x, double nu, double a) {
    return report_dict(scaled_bound(SortedSample(std::move(x)), nu, a));
  });
  m.def("partial_mean_bound", [](std::vector<double> x, double nu) {
    return report_dict(partial_mean_bound(SortedSample(std::move(x)), nu));
  });
  m.def("coverage_probability", &coverage_probability, py::arg("n"), py::arg("a"));
  m.def("min_n_for_max_exceeding", &min_n_for_max_exceeding, py::arg("dist"), py::arg("x0"),
        py::arg("confidence") = 0.99);

  m.def("simulate_table1", [](const DistributionSpec& s, std::size_t n, std::size_t replicates,
                              std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.spec = s;
    cfg.n = n;
    cfg.replicates = replicates;
    cfg.base_seed = seed;
    const auto row = run_table1(cfg);
    py::dict d;
    d["q1"] = row.q1;
    d["median"] = row.scaled_bound.median;
    d["mean"] = row.scaled_bound.mean;
    py::dict ex;
    for (const auto& e : row.exceed) ex[py::float_(e.level)] = e.probability;
    d["exceed"] = ex;
    return d;
  }, py::arg("dist"), py::arg("n"), py::arg("replicates") = 10000, py::arg("seed") = kDefaultSeed);

  m.def("fit_gpd_mle", [](std::vector<double> y) {
    const auto r = fit_gpd_mle(y);
    return py::make_tuple(r.xi, r.beta, r.loglik);
  });
  m.def("fit_lpd", [](std::vector<double> x, double mu) {
    return fit_dict(fit_lpd(SortedSample(std::move(x)), mu));
  });
  m.def("fit_hill", [](std::vector<double> x, double mu) {
    return fit_hill(SortedSample(std::move(x)), mu);
  });
  m.def("residual_cv", [](std::vector<double> y) { return residual_cv(y); });
  m.def("select_threshold", [](std::vector<double> x, const std::string& method, std::uint64_t seed,
                               std::size_t bootstrap) {
    const SortedSample s(std::move(x));
    ThresholdScan scan;
    if (method == "clauset") {
      scan = select_threshold_clauset(s);
    } else {
      CvOptions opt;
      opt.policy = method == "cv-best" ? ScanMethod::CvBest : ScanMethod::CvLowest;
      opt.seed = seed;
      opt.bootstrap = bootstrap;
      scan = select_threshold_cv(s, opt);
    }
    return scan.found() ? py::object(py::float_(scan.chosen().mu)) : py::object(py::none());
  }, py::arg("sample"), py::arg("method") = "clauset", py::arg("seed") = kDefaultSeed,
     py::arg("bootstrap") = 500);

  m.def("log_returns", [](const std::string& csv) {
    std::istringstream in(csv);
    const auto r = log_returns(load_prices(in));
    std::vector<py::tuple> out;
    for (const auto& e : r.entries) out.push_back(py::make_tuple(format_date(e.date), e.value));
    return out;
  });

  m.def("run_cli", [](const std::vector<std::string>& args, const std::string& stdin_text) {
    std::ostringstream out;
    std::ostringstream err;
    std::istringstream in(stdin_text);
    const int code = cli::run(args, out, err, in);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), py::arg("stdin") = "");
}
