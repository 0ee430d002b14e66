#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nag/cournot.hpp"
#include "nag/harness.hpp"
#include "nag/network.hpp"
#include "nag/oracle.hpp"
#include "nag/solver.hpp"

namespace py = pybind11;
using namespace nag;

namespace {

py::dict trace_to_dict(const ConvergenceTrace& trace) {
  const auto m = trace.records.size();
  Eigen::VectorXi iteration(m);
  Eigen::VectorXd gap(m), consensus(m), zeta1(m), zeta2(m);
  for (size_t k = 0; k < m; ++k) {
    iteration[k] = trace.records[k].iteration;
    gap[k] = trace.records[k].gap;
    consensus[k] = trace.records[k].consensus_error;
    zeta1[k] = trace.records[k].zeta1;
    zeta2[k] = trace.records[k].zeta2;
  }
  py::dict d;
  d["iteration"] = iteration;
  d["gap"] = gap;
  d["consensus_error"] = consensus;
  d["zeta1"] = zeta1;
  d["zeta2"] = zeta2;
  const char* status = trace.status == RunStatus::Converged  ? "converged"
                       : trace.status == RunStatus::Diverged ? "diverged"
                                                             : "max_iters";
  d["status"] = status;
  return d;
}

SolverConfig make_config(double alpha, double beta, int max_iters, double gap_tolerance,
                         const std::string& schedule) {
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.max_iters = max_iters;
  cfg.gap_tolerance = gap_tolerance;
  cfg.schedule = schedule == "diminishing" ? StepSchedule::Diminishing : StepSchedule::Fixed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_nag, m) {
  m.doc() = "Distributed Nash-equilibrium seeking for networked aggregative games";

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("box", &FeasibleSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("box_hyperplane", &FeasibleSet::box_hyperplane, py::arg("lower"),
                  py::arg("upper"), py::arg("normal"), py::arg("offset"))
      .def("project", &FeasibleSet::project, py::arg("y"))
      .def("contains", &FeasibleSet::contains, py::arg("x"), py::arg("tol") = 1e-10)
      .def("is_bounded", &FeasibleSet::is_bounded)
      .def_property_readonly("dim", &FeasibleSet::dim);

  py::class_<GameInstance>(m, "GameInstance")
      .def_property_readonly("n", &GameInstance::num_players)
      .def_property_readonly("p", &GameInstance::action_dim)
      .def("eval_cost", &GameInstance::eval_cost, py::arg("i"), py::arg("x_i"), py::arg("z"))
      .def("eval_grad", &GameInstance::eval_grad, py::arg("i"), py::arg("x_i"), py::arg("z"))
      .def("eval_phi", &GameInstance::eval_phi, py::arg("x"))
      .def("aggregate", &GameInstance::aggregate, py::arg("x"))
      .def("phi_matrix", &GameInstance::phi_matrix)
      .def("phi_offset", &GameInstance::phi_offset)
      .def("feasible_set", &GameInstance::feasible_set, py::arg("i"),
           py::return_value_policy::reference_internal)
      .def("monotonicity_constants", [](const GameInstance& g) {
        const auto ml = g.monotonicity_constants();
        return py::make_tuple(ml.mu, ml.lipschitz);
      });

  m.def("build_cournot",
        py::overload_cast<int, int, std::uint64_t, double>(&build_cournot), py::arg("n"),
        py::arg("L"), py::arg("seed"), py::arg("cap") = 500.0);

  py::class_<WeightMatrix>(m, "WeightMatrix")
      .def_property_readonly("matrix", &WeightMatrix::matrix)
      .def_property_readonly("sigma", &WeightMatrix::sigma);

  m.def("build_weight_matrix", [](const std::string& kind, int n) {
    return WeightMatrix::from_edges(build_topology(parse_topology(kind), n));
  }, py::arg("kind"), py::arg("n"));
  m.def("topology_edges", [](const std::string& kind, int n) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : build_topology(parse_topology(kind), n).edges) out.push_back(e);
    return out;
  }, py::arg("kind"), py::arg("n"));
  m.def("is_connected", [](const std::string& kind, int n) {
    return is_connected(build_topology(parse_topology(kind), n));
  }, py::arg("kind"), py::arg("n"));

  m.def("solve_reference", [](const GameInstance& game, double tol) {
    const auto ref = solve_reference(game, tol);
    py::dict d;
    d["x_star"] = ref.x_star;
    d["residual"] = ref.residual;
    d["iterations"] = ref.iterations;
    return d;
  }, py::arg("game"), py::arg("tol") = 1e-10);
  m.def("vi_residual", &vi_residual, py::arg("game"), py::arg("x"), py::arg("alpha"));

  m.def("run_algorithm1",
        [](const GameInstance& game, const WeightMatrix& W, const Eigen::MatrixXd& X0,
           double alpha, double beta, int max_iters, double gap_tolerance,
           const std::string& schedule, std::optional<Eigen::VectorXd> x_star) {
          const auto cfg = make_config(alpha, beta, max_iters, gap_tolerance, schedule);
          const auto trace =
              run_algorithm1(game, W, cfg, X0, x_star ? &*x_star : nullptr);
          return trace_to_dict(trace);
        },
        py::arg("game"), py::arg("W"), py::arg("X0"), py::arg("alpha"), py::arg("beta") = 1.0,
        py::arg("max_iters") = 200, py::arg("gap_tolerance") = 0.0,
        py::arg("schedule") = "fixed", py::arg("x_star") = std::nullopt);

  m.def("step_centralized", &step_centralized, py::arg("x"), py::arg("game"), py::arg("alpha"));

  m.def("theory_constants", [](double alpha, double beta, double mu, double L, double sigma) {
    const auto t = theory_constants(alpha, beta, mu, L, sigma);
    py::dict d;
    d["a"] = t.a;
    d["b"] = t.b;
    d["c"] = t.c;
    d["d"] = t.d;
    d["M"] = Eigen::MatrixXd(t.M);
    d["rho"] = t.rho;
    d["rate_bound"] = t.rate_bound;
    d["certificate_applies"] = t.certificate_applies;
    return d;
  }, py::arg("alpha"), py::arg("beta"), py::arg("mu"), py::arg("L"), py::arg("sigma"));
  m.def("beta_max_bound", &beta_max_bound, py::arg("mu"), py::arg("L"), py::arg("sigma"));
  m.def("alpha_max_bound", &alpha_max_bound, py::arg("mu"), py::arg("L"), py::arg("sigma"),
        py::arg("beta"));
}
