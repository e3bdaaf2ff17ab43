#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/gibbs.hpp"
#include "strip/kpz.hpp"
#include "strip/lg_dynamics.hpp"
#include "strip/lpp_dynamics.hpp"
#include "strip/mpa.hpp"
#include "strip/path.hpp"
#include "strip/stationary.hpp"

namespace py = pybind11;
using namespace strip;

namespace {

ModelParams make_model(const std::string& type, int n, const std::vector<double>& bulk, double b1, double b2) {
  if (type != "geometric" && type != "log-gamma") throw Error(ErrorKind::Config, "type must be geometric or log-gamma");
  ModelParams p = type == "log-gamma" ? ModelParams::log_gamma(n, 1.0, b1, b2) : ModelParams::geometric(n, 0.5, b1, b2);
  if (bulk.size() == 1)
    p.bulk.assign(static_cast<std::size_t>(n), bulk[0]);
  else
    p.bulk = bulk;
  return validate_params(p);
}

py::dict model_dict(const ModelParams& p) {
  py::dict d;
  d["type"] = p.model == Model::LogGamma ? "log-gamma" : "geometric";
  d["N"] = p.n;
  d["bulk"] = p.bulk;
  d["left_boundary"] = p.left_boundary;
  d["right_boundary"] = p.right_boundary;
  d["fan_region"] = p.fan_region;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationary measures of open last passage percolation and log-gamma polymers on a strip";

  py::register_exception<Error>(m, "StripError", PyExc_ValueError);

  py::class_<ModelParams>(m, "Model")
      .def(py::init(&make_model), py::arg("type"), py::arg("N"), py::arg("bulk"), py::arg("left"), py::arg("right"))
      .def_readonly("N", &ModelParams::n)
      .def_readonly("bulk", &ModelParams::bulk)
      .def_readonly("left_boundary", &ModelParams::left_boundary)
      .def_readonly("right_boundary", &ModelParams::right_boundary)
      .def_readonly("fan_region", &ModelParams::fan_region)
      .def("as_dict", &model_dict)
      .def("__repr__", [](const ModelParams& p) { return py::repr(model_dict(p)).cast<std::string>(); });

  m.def("geom_pmf", &geom_pmf, py::arg("a"), py::arg("k"));

  m.def(
      "check_cauchy_geometric",
      [](std::pair<long, long> l, std::pair<long, long> mu, const std::string& a, const std::string& b) {
        const auto r = check_cauchy_geometric({l.first, l.second}, {mu.first, mu.second}, mpq_class(a), mpq_class(b));
        return py::make_tuple(r.lhs.get_str(), r.rhs.get_str());
      },
      py::arg("lam"), py::arg("mu"), py::arg("a"), py::arg("b"),
      "Both sides of the skew Cauchy identity as exact fractions 'p/q'.");
  m.def(
      "check_littlewood_geometric",
      [](std::pair<long, long> k, const std::string& a, const std::string& c) {
        const auto r = check_littlewood_geometric({k.first, k.second}, mpq_class(a), mpq_class(c));
        return py::make_tuple(r.lhs.get_str(), r.rhs.get_str());
      },
      py::arg("kappa"), py::arg("a"), py::arg("c"));

  m.def(
      "sample_stationary",
      [](const ModelParams& p, std::size_t n, std::uint64_t seed, int threads) {
        IsSample s;
        {
          py::gil_scoped_release release;
          s = sample_stationary_is(p, n, seed, threads);
        }
        py::array_t<double> l1({n, static_cast<std::size_t>(p.n)});
        auto v = l1.mutable_unchecked<2>();
        for (std::size_t i = 0; i < n; ++i)
          for (int j = 0; j < p.n; ++j) v(i, j) = s.samples[i].walks.l1[static_cast<std::size_t>(j)];
        py::dict d;
        d["l1"] = l1;
        d["log_weights"] = py::array_t<double>(py::cast(s.log_weights()));
        d["ess"] = s.ess;
        d["proposal"] = to_string(s.proposal);
        return d;
      },
      py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1,
      "Importance-weighted samples of the top walk L1(1..N) under the stationary measure.");

  m.def(
      "increment_chain",
      [](const ModelParams& p, const std::vector<double>& init, int steps, std::uint64_t seed) {
        RngStream rng(seed, 0);
        std::vector<std::vector<double>> out;
        if (p.model == Model::GeometricLPP) {
          std::vector<long> li;
          for (double x : init) li.push_back(std::lround(x));
          for (const auto& v : run_increment_chain(li, p, steps, rng)) out.emplace_back(v.begin(), v.end());
        } else {
          out = run_increment_chain_lg(init, p, steps, rng);
        }
        return out;
      },
      py::arg("model"), py::arg("init"), py::arg("steps"), py::arg("seed"));

  m.def(
      "stationarity_test",
      [](const ModelParams& p, std::size_t n, std::uint64_t seed, int threads, int resamples, double min_ess) {
        StationarityReport r;
        {
          py::gil_scoped_release release;
          r = stationarity_test(p, n, seed, threads, resamples, min_ess);
        }
        py::dict d;
        d["proposal"] = to_string(r.proposal);
        d["ess_reference"] = r.ess_reference;
        d["ess_evolved"] = r.ess_evolved;
        std::vector<double> ks, pv;
        for (const auto& c : r.coords) {
          ks.push_back(c.statistic);
          pv.push_back(c.p_value);
        }
        d["ks"] = ks;
        d["p_values"] = pv;
        return d;
      },
      py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1, py::arg("resamples") = 1000,
      py::arg("min_ess") = 1000.0);

  m.def(
      "verify_quadratic_algebra",
      [](double a, double b, double c1, double c2, int k, int x_max, double tol) {
        const auto r = verify_quadratic_algebra(a, b, c1, c2, k, x_max, tol);
        py::dict d;
        d["max_residual"] = r.max();
        d["block"] = r.block;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("c1"), py::arg("c2"), py::arg("K") = 60, py::arg("x_max") = 5,
      py::arg("tol") = 1e-10);

  m.def(
      "partition_function",
      [](const ModelParams& p, int radius) {
        const auto r = partition_z_lpp(p, DownRightPath::horizontal(p.bulk), radius);
        return py::make_tuple(r.value, r.error_bound);
      },
      py::arg("model"), py::arg("radius") = 40, "Geometric model, horizontal path; returns (Z, error bound).");
  m.def("partition_function_lg_n1", &partition_z_lg_n1_closed_form, py::arg("alpha"), py::arg("u"), py::arg("v"));

  m.def(
      "kpz_convergence",
      [](std::vector<double> eps, double u, double v, std::size_t n, std::uint64_t seed, int threads) {
        ConvergenceOptions o;
        o.epsilons = std::move(eps);
        o.u = u;
        o.v = v;
        o.n = n;
        o.threads = threads;
        ConvergenceReport r;
        {
          py::gil_scoped_release release;
          r = convergence_diagnostic(o, seed);
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["epsilon"] = row.epsilon;
          d["ks"] = row.ks;
          d["ks_max"] = row.ks_max;
          d["ks_max_se"] = row.ks_max_se;
          d["z"] = row.z;
          rows.append(d);
        }
        py::dict d;
        d["rows"] = rows;
        d["monotone_within_ci"] = r.monotone_within_ci;
        d["z_hariya_yor"] = r.z_hy;
        return d;
      },
      py::arg("epsilons"), py::arg("u"), py::arg("v"), py::arg("n") = 100000, py::arg("seed") = 1,
      py::arg("threads") = 1);
}
