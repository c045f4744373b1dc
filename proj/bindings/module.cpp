#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "corereach/config.hpp"
#include "corereach/diagnostics.hpp"
#include "corereach/engine.hpp"
#include "corereach/errors.hpp"
#include "corereach/game.hpp"
#include "corereach/network.hpp"
#include "corereach/polytope.hpp"

namespace py = pybind11;
using namespace corereach;

namespace {

TUGame make_game(int n_agents, const std::map<std::string, double>& values) {
  std::map<Coalition, double> map;
  for (const auto& [key, v] : values) map[coalition_from_key(key, n_agents)] = v;
  return TUGame(n_agents, std::move(map));
}

py::dict run_experiment_json(const std::string& config_json) {
  const ExperimentConfig cfg = parse_config(nlohmann::json::parse(config_json));
  const Polyhedron core = core_polyhedron(cfg.game);
  const RunResult result = run(core, cfg.graphs, cfg.make_engine_config(),
                               cfg.make_initial_state());

  const size_t rows = result.rows.size();
  Eigen::VectorXd k(rows), dist(rows), normalized(rows), residual(rows), sum_gap(rows);
  for (size_t i = 0; i < rows; ++i) {
    k(i) = result.rows[i].k;
    dist(i) = result.rows[i].dist;
    normalized(i) = result.rows[i].normalized_dist;
    residual(i) = result.rows[i].consensus_residual;
    sum_gap(i) = result.rows[i].block_sum_gap;
  }

  py::dict out;
  out["converged"] = result.converged;
  out["final_k"] = result.final_k;
  out["final_allocation"] = Eigen::VectorXd(result.final_consensus);
  out["final_dist"] = result.rows.back().dist;
  out["metric_monotone"] = result.metric_monotone;
  py::dict trajectory;
  trajectory["k"] = k;
  trajectory["dist"] = dist;
  trajectory["normalized_dist"] = normalized;
  trajectory["consensus_residual"] = residual;
  trajectory["block_sum_gap"] = sum_gap;
  out["trajectory"] = trajectory;
  return out;
}

py::dict validate_config_json(const std::string& config_json) {
  const ExperimentConfig cfg = parse_config(nlohmann::json::parse(config_json));
  const ValidationReport report = validate_experiment(cfg);
  py::dict gates;
  for (const auto& gate : report.gates) {
    py::dict g;
    g["pass"] = gate.pass;
    g["detail"] = gate.detail;
    gates[gate.name.c_str()] = g;
  }
  py::dict out;
  out["all_pass"] = report.all_pass;
  out["smallest_q"] = report.smallest_q;
  out["gamma"] = report.gamma;
  out["gates"] = gates;
  return out;
}

}  // namespace

PYBIND11_MODULE(_corereach, m) {
  m.doc() = "Distributed payoff allocation over switching communication graphs";

  py::register_exception<empty_set_error>(m, "EmptySetError");
  py::register_exception<nonconvergence_error>(m, "NonconvergenceError");
  py::register_exception<contract_error>(m, "ContractError");
  py::register_exception<monitor_error>(m, "MonitorError");
  py::register_exception<config_error>(m, "ConfigError");

  py::class_<TUGame>(m, "Game")
      .def(py::init(&make_game), py::arg("n_agents"), py::arg("values"),
           "Transferable-utility game; coalition keys are sorted 1-based "
           "indices like '1,3'. Unlisted coalitions are worth 0.")
      .def_property_readonly("n_agents", &TUGame::n_agents)
      .def_property_readonly("grand_value", &TUGame::grand_value)
      .def("value",
           [](const TUGame& g, const std::vector<int>& members) {
             return g.value(Coalition::of(members));
           },
           py::arg("members"))
      .def("is_efficient",
           [](const TUGame& g, const Eigen::VectorXd& x, double tol) {
             return is_efficient(g, x, tol);
           },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("core_membership",
           [](const TUGame& g, const Eigen::VectorXd& x, double tol) {
             return core_membership(g, x, tol);
           },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("core_nonempty", &core_nonempty);

  py::class_<Polyhedron>(m, "Polyhedron")
      .def_property_readonly("dim", &Polyhedron::dim)
      .def_property_readonly("n_eq", &Polyhedron::n_eq)
      .def_property_readonly("n_ineq", &Polyhedron::n_ineq)
      .def("contains", &Polyhedron::contains, py::arg("x"), py::arg("tol") = 1e-9)
      .def("project", [](const Polyhedron& p, const Eigen::VectorXd& x) {
        return project(p, x);
      })
      .def("overproject", [](const Polyhedron& p, const Eigen::VectorXd& x) {
        return overproject(p, x);
      })
      .def("apply_t",
           [](const Polyhedron& p, double beta, const Eigen::VectorXd& x) {
             return apply_T(p, beta, x);
           },
           py::arg("beta"), py::arg("x"))
      .def("distance", [](const Polyhedron& p, const Eigen::VectorXd& x) {
        return distance(p, x);
      })
      .def("project_oracle", [](const Polyhedron& p, const Eigen::VectorXd& x) {
        return project_oracle(p, x);
      });

  m.def("core_polyhedron", &core_polyhedron, py::arg("game"),
        "Efficiency equality plus one rationality inequality per nonempty "
        "proper coalition.");

  m.def("run_experiment", &run_experiment_json, py::arg("config_json"),
        "Run a full experiment from a JSON config string; returns the summary "
        "and trajectory arrays.");
  m.def("validate_config", &validate_config_json, py::arg("config_json"),
        "Evaluate the assumption gates for a JSON config string.");
}
