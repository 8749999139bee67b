#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdef/bench.hpp"
#include "pdef/chebyshev.hpp"
#include "pdef/densemat.hpp"
#include "pdef/errors.hpp"
#include "pdef/filters.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

pdef::DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
  return pdef::DenseMatrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Array to_array(const pdef::DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

pdef::ExperimentConfig make_config(const std::string& filter, std::size_t steps, std::size_t runs,
                                   std::size_t particles, std::size_t grid, std::size_t state_quantiles,
                                   std::size_t noise_points, std::uint64_t seed) {
  pdef::ExperimentConfig cfg;
  cfg.filters = pdef::parse_filters(filter);
  cfg.steps = steps;
  cfg.runs = runs;
  cfg.particles = particles;
  cfg.pdef.grid_nodes = grid;
  cfg.pdef.state_quantiles = state_quantiles;
  cfg.pdef.noise_points = noise_points;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_pdef, m) {
  m.doc() = "Density evolution filter toolkit";

  py::register_exception<pdef::FilterError>(m, "FilterError", PyExc_RuntimeError);

  m.def("expm", [](const Array& a) { return to_array(pdef::expm(to_matrix(a))); }, py::arg("a"),
        "Matrix exponential (Pade 6/6 with scaling and squaring).");
  m.def("gauss_lobatto_nodes", &pdef::gauss_lobatto_nodes, py::arg("order"));
  m.def("diff_matrix", [](std::size_t order) { return to_array(pdef::diff_matrix(order)); }, py::arg("order"));
  m.def("cc_weights", &pdef::cc_weights, py::arg("order"));
  m.def(
      "gaussian_quantile_points",
      [](std::size_t n, double variance) {
        const auto q = pdef::gaussian_quantile_points(n, variance);
        return py::make_tuple(q.points, q.weights);
      },
      py::arg("n"), py::arg("variance"));
  m.def(
      "systematic_resample",
      [](const std::vector<double>& w, std::size_t n_out, double u0) { return pdef::systematic_resample(w, n_out, u0); },
      py::arg("weights"), py::arg("n_out"), py::arg("u0"));

  m.def(
      "run_experiment",
      [](const std::string& filter, std::size_t steps, std::size_t runs, std::size_t particles, std::size_t grid,
         std::size_t state_quantiles, std::size_t noise_points, std::uint64_t seed) {
        const auto cfg = make_config(filter, steps, runs, particles, grid, state_quantiles, noise_points, seed);
        const auto res = [&] {
          py::gil_scoped_release release;
          return pdef::run_experiment(cfg);
        }();
        py::dict out;
        for (const auto& r : res.reports) {
          py::dict d;
          d["runs_ok"] = r.runs_ok;
          d["runs_failed"] = r.runs_failed;
          d["mean_rmse"] = r.mean;
          d["std_rmse"] = r.stddev;
          d["per_run"] = r.per_run;
          d["failures"] = r.failures;
          out[py::str(pdef::to_string(r.filter))] = d;
        }
        return out;
      },
      py::arg("filter") = "all", py::arg("steps") = 50, py::arg("runs") = 50, py::arg("particles") = 100,
      py::arg("grid") = 100, py::arg("state_quantiles") = 16, py::arg("noise_points") = 16, py::arg("seed") = 42,
      "Seeded multi-run RMSE experiment on the growth benchmark. Returns {filter: summary dict}.");

  m.def(
      "trajectory",
      [](const std::string& filter, std::size_t steps, std::uint64_t seed) {
        auto cfg = make_config(filter, steps, 1, 100, 100, 16, 16, seed);
        const auto trace = [&] {
          py::gil_scoped_release release;
          return pdef::run_single(cfg, 0);
        }();
        py::dict out;
        std::vector<double> truth, obs;
        std::vector<std::optional<double>> est[3];
        for (const auto& r : trace.records) {
          truth.push_back(r.truth);
          obs.push_back(r.observation);
          est[0].push_back(r.ukf);
          est[1].push_back(r.pf);
          est[2].push_back(r.pdef);
        }
        out["truth"] = truth;
        out["observation"] = obs;
        const char* names[3] = {"ukf", "pf", "pdef"};
        for (int i = 0; i < 3; ++i) out[names[i]] = est[i];
        return out;
      },
      py::arg("filter") = "all", py::arg("steps") = 50, py::arg("seed") = 7,
      "Per-step truth, observations and filter estimates (None where a filter is absent or failed).");
}
