#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdlab/experiments.hpp"
#include "pdlab/taylor.hpp"

namespace py = pybind11;
using namespace pdlab;
using nlohmann::json;

namespace {

std::string solve_json(const std::string& config) {
  const ExperimentConfig cfg = parse_config(json::parse(config));
  const Density rho = parse_density(cfg.density, cfg.domain, cfg.m);
  const SolveResult r = solve_density(rho, cfg.m, cfg.disc, cfg.k, cfg.solver);
  json out = json::parse(to_json(r.spectrum));
  out.erase("eigenvectors");
  out["dim"] = r.dim;
  out["kernel_expected"] = r.kernel_expected;
  out["kernel_ok"] = r.kernel_ok;
  out["mass"] = rho.mass();
  out["sup"] = rho.sup_norm();
  return out.dump();
}

std::string sweep_json(const std::string& config) {
  const ExperimentConfig cfg = parse_config(json::parse(config));
  const SweepResult s = run_sweep(cfg);
  json out = {{"rows", sweep_table(s).json()}, {"error", s.error}, {"fits", json::array()}};
  std::vector<int> js = cfg.sweep.fit_j;
  if (js.empty()) js.push_back(expected_kernel_dimension(s.N, s.m) + 1);
  if (s.error.empty() && s.points.size() >= 5)
    for (int j : js) {
      const RateFit f = fit_rate(s, j);
      out["fits"].push_back({{"j", f.j}, {"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2},
                             {"points", f.points}, {"excluded", f.excluded}});
    }
  return out.dump();
}

std::string taylor_json(int m, int N, int k, const std::vector<double>& eps, double spread_limit) {
  const TaylorReport r = taylor_remainder_check(m, N, k, eps, spread_limit);
  json panel = json::array();
  for (const auto& p : r.panel)
    panel.push_back({{"function", p.function}, {"ratio", p.ratio}, {"spread", p.spread}, {"exact", p.exact},
                     {"bounded", p.bounded}});
  return json{{"case", r.tcase == TaylorCase::Odd ? "odd" : "even"}, {"pass", r.pass()},
              {"worst_spread", r.worst_spread}, {"panel", panel}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_pdlab, mod) {
  py::register_exception<Error>(mod, "PdlabError", PyExc_ValueError);
  mod.def("expected_kernel_dimension", &expected_kernel_dimension, py::arg("N"), py::arg("m"));
  mod.def("weyl_reference", &weyl_reference, py::arg("N"), py::arg("m"), py::arg("j"), py::arg("lp_integral"));
  mod.def("solve_json", &solve_json, py::arg("config"));
  mod.def("sweep_json", &sweep_json, py::arg("config"));
  mod.def("taylor_json", &taylor_json, py::arg("m"), py::arg("N"), py::arg("k"), py::arg("eps"),
          py::arg("spread_limit") = 10.0);
}
