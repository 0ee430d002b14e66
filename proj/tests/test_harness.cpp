#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>

#include "nag/errors.hpp"
#include "nag/harness.hpp"
#include "nag/solver.hpp"

using namespace nag;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small instance so reference solves stay in the millisecond range.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.game.n = 4;
  cfg.game.L = 1;
  cfg.game.seed = 7;
  cfg.topology = TopologyKind::Complete;
  cfg.solver.alpha = 0.02;
  cfg.solver.beta = 1.0;
  cfg.solver.max_iters = 300;
  return cfg;
}

std::string tmp_path(const char* name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir ? dir : "/tmp") + "/" + name;
}

}  // namespace

TEST_CASE("config: defaults without any keys") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.game.n == 20);
  CHECK(cfg.game.L == 10);
  CHECK(cfg.game.cap == 500.0);
  CHECK(cfg.game.seed == 1);
  CHECK(cfg.topology == TopologyKind::Linear);
  CHECK(cfg.solver.alpha == 0.05);
  CHECK(cfg.solver.beta == 1.0);
  CHECK(cfg.solver.max_iters == 200);
  CHECK(cfg.solver.schedule == StepSchedule::Fixed);
  CHECK(cfg.init == InitKind::Zero);
  CHECK(cfg.output_path.empty());
}

TEST_CASE("config: every key round-trips") {
  const char* text = R"({
    "game": {"n": 6, "L": 2, "cap": 100.0, "seed": 42},
    "topology": {"kind": "log"},
    "solver": {"alpha": 0.01, "beta": 0.5, "max_iters": 50,
               "gap_tolerance": 1e-8, "schedule": "fixed"},
    "tuner": {"alpha_min": 1e-4, "alpha_max": 0.2, "grid_size": 5, "refine_rounds": 2},
    "init": "random",
    "output": {"path": "trace.csv"}
  })";
  const auto cfg = parse_config(text);
  CHECK(cfg.game.n == 6);
  CHECK(cfg.game.L == 2);
  CHECK(cfg.game.cap == 100.0);
  CHECK(cfg.game.seed == 42);
  CHECK(cfg.topology == TopologyKind::Log);
  CHECK(cfg.solver.alpha == 0.01);
  CHECK(cfg.solver.beta == 0.5);
  CHECK(cfg.solver.max_iters == 50);
  CHECK(cfg.solver.gap_tolerance == 1e-8);
  CHECK(cfg.tuner.alpha_min == 1e-4);
  CHECK(cfg.tuner.alpha_max == 0.2);
  CHECK(cfg.tuner.grid_size == 5);
  CHECK(cfg.tuner.refine_rounds == 2);
  CHECK(cfg.init == InitKind::Random);
  CHECK(cfg.output_path == "trace.csv");
}

TEST_CASE("config: diminishing schedule parses and is validated") {
  const auto cfg = parse_config(
      R"({"solver": {"schedule": "diminishing", "beta": 1.0, "diminishing_exponent": 0.75}})");
  CHECK(cfg.solver.schedule == StepSchedule::Diminishing);
  CHECK(cfg.solver.diminishing_exponent == 0.75);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"schedule": "diminishing", "beta": 0.5}})"),
                  ConfigError);
}

TEST_CASE("config: malformed input is rejected with ConfigError") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"topology": {"kind": "ring"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"schedule": "adaptive"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"init": "ones"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"game": {"n": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"alpha": -0.1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tuner": {"grid_size": 1}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path/cfg.json"), ConfigError);
}

TEST_CASE("format_float: 17 significant digits, scientific") {
  CHECK(format_float(1.0) == "1.0000000000000000e+00");
  CHECK(format_float(0.1) == "1.0000000000000001e-01");
  CHECK(format_float(-2.5e-13) == "-2.4999999999999999e-13");
}

TEST_CASE("write_trace: header, column row and records") {
  ConvergenceTrace trace;
  trace.records.push_back(TraceRecord{0, 1.0, 0.5, 1.0, 0.5, 0.05});
  trace.records.push_back(TraceRecord{1, 0.25, 0.125, 0.25, 0.125, 0.05});
  const std::string path = tmp_path("nag_trace_unit.csv");
  write_trace(path, {{"method", "algorithm1"}, {"sigma", format_float(0.25)}}, trace);
  const std::string text = read_file(path);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# method: algorithm1");
  std::getline(lines, line);
  CHECK(line == "# sigma: 2.5000000000000000e-01");
  std::getline(lines, line);
  CHECK(line == "iteration,gap,consensus_error,zeta1,zeta2");
  std::getline(lines, line);
  CHECK(line ==
        "0,1.0000000000000000e+00,5.0000000000000000e-01,1.0000000000000000e+00,"
        "5.0000000000000000e-01");
  std::getline(lines, line);
  CHECK(line.substr(0, 2) == "1,");
  CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("prepare_experiment: feasible deterministic initial points") {
  auto cfg = small_config();
  const auto s1 = prepare_experiment(cfg);
  const auto s2 = prepare_experiment(cfg);
  CHECK(s1.X0 == s2.X0);
  for (int i = 0; i < cfg.game.n; ++i)
    CHECK(s1.game.feasible_set(i).contains(s1.X0.row(i).transpose(), 1e-9));

  cfg.init = InitKind::Random;
  const auto s3 = prepare_experiment(cfg);
  CHECK(s3.X0 != s1.X0);
  for (int i = 0; i < cfg.game.n; ++i)
    CHECK(s3.game.feasible_set(i).contains(s3.X0.row(i).transpose(), 1e-9));
}

TEST_CASE("run_experiment: converges on a small instance and reports theory") {
  auto cfg = small_config();
  cfg.solver.gap_tolerance = 1e-9;
  cfg.solver.max_iters = 20000;
  const auto res = run_experiment(cfg);
  CHECK(res.trace.status == RunStatus::Converged);
  CHECK(res.trace.final_gap() <= 1e-9);
  // Complete graph, n = 4: delta = 1/6 gives diagonal 1/2 and sigma = 1/3.
  CHECK(res.sigma == doctest::Approx(1.0 / 3.0));
  CHECK(res.constants.mu > 0.0);
  REQUIRE(res.theory.has_value());
  CHECK(res.fitted_rate < 1.0);
  CHECK(res.fitted_rate > 0.0);
}

TEST_CASE("run_experiment: byte-identical trace files across repeated runs") {
  auto cfg = small_config();
  const std::string p1 = tmp_path("nag_det_a.csv");
  const std::string p2 = tmp_path("nag_det_b.csv");
  cfg.output_path = p1;
  run_experiment(cfg);
  cfg.output_path = p2;
  run_experiment(cfg);
  const std::string t1 = read_file(p1);
  CHECK(t1 == read_file(p2));
  CHECK(t1.find("# method: algorithm1") == 0);
  CHECK(t1.find("iteration,gap,consensus_error,zeta1,zeta2") != std::string::npos);
}

TEST_CASE("run_compare: same start, baseline clearly slower, suffixed outputs") {
  auto cfg = small_config();
  cfg.solver.max_iters = 400;
  cfg.output_path = tmp_path("nag_cmp.csv");
  const auto res = run_compare(cfg);
  // Identical instance and initial point: iteration-0 gaps agree exactly.
  CHECK(res.algorithm1.trace.records.front().gap == res.baseline.trace.records.front().gap);
  CHECK(res.algorithm1.theory.has_value());
  CHECK_FALSE(res.baseline.theory.has_value());
  CHECK(res.algorithm1.trace.final_gap() < res.baseline.trace.final_gap());
  CHECK(read_file(tmp_path("nag_cmp.alg1.csv")).find("# method: algorithm1") == 0);
  CHECK(read_file(tmp_path("nag_cmp.baseline.csv")).find("# method: diminishing") == 0);
}

TEST_CASE("tune_alpha: result lies in range and beats the grid endpoints") {
  auto cfg = small_config();
  cfg.tuner.alpha_min = 1e-3;
  cfg.tuner.alpha_max = 0.5;
  cfg.tuner.grid_size = 9;
  const auto setup = prepare_experiment(cfg);
  const double alpha = tune_alpha(setup, 1.0, 150, cfg.tuner);
  CHECK(alpha >= cfg.tuner.alpha_min);
  CHECK(alpha <= cfg.tuner.alpha_max);

  auto gap_at = [&](double a) {
    SolverConfig s;
    s.alpha = a;
    s.max_iters = 150;
    const auto t = run_algorithm1(setup.game, setup.W, s, setup.X0, &setup.reference.x_star);
    return t.status == RunStatus::Diverged ? std::numeric_limits<double>::infinity()
                                           : t.final_gap();
  };
  CHECK(gap_at(alpha) <= gap_at(cfg.tuner.alpha_min));
  CHECK(gap_at(alpha) <= gap_at(cfg.tuner.alpha_max));
}

TEST_CASE("tune_alpha: honors NAG_MAX_WORKERS") {
  setenv("NAG_MAX_WORKERS", "1", 1);
  CHECK(max_workers() == 1);
  auto cfg = small_config();
  const auto setup = prepare_experiment(cfg);
  const double serial = tune_alpha(setup, 1.0, 100, cfg.tuner);
  setenv("NAG_MAX_WORKERS", "4", 1);
  CHECK(max_workers() == 4);
  CHECK(tune_alpha(setup, 1.0, 100, cfg.tuner) == serial);
  unsetenv("NAG_MAX_WORKERS");
  CHECK(max_workers() >= 1);
}

TEST_CASE("run_beta_sweep: echoes betas, rejects out-of-range values") {
  auto cfg = small_config();
  cfg.solver.max_iters = 150;
  cfg.tuner.grid_size = 7;
  cfg.tuner.refine_rounds = 0;
  const auto rows = run_beta_sweep(cfg, {0.5, 1.0});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].beta == 0.5);
  CHECK(rows[1].beta == 1.0);
  for (const auto& r : rows) {
    CHECK(r.alpha > 0.0);
    CHECK(std::isfinite(r.gap_final));
  }
  CHECK_THROWS_AS(run_beta_sweep(cfg, {0.0}), ConfigError);
  CHECK_THROWS_AS(run_beta_sweep(cfg, {1.5}), ConfigError);
}

TEST_CASE("bounds_report: certified rows satisfy rho < rate_bound < 1") {
  const auto rep = bounds_report(1.0, 1.0, 0.5, 5);
  CHECK(rep.beta_max > 0.0);
  CHECK(rep.beta_max <= 1.0);
  REQUIRE(!rep.rows.empty());
  for (const auto& row : rep.rows) {
    CHECK(row.beta < rep.beta_max);
    CHECK(row.alpha > 0.0);
    CHECK(row.rho < row.rate_bound);
    CHECK(row.rate_bound < 1.0);
  }
}

TEST_CASE("bounds_report: sigma = 0 certifies beta = 1") {
  const auto rep = bounds_report(1.0, 1.0, 0.0, 3);
  CHECK(rep.beta_max == doctest::Approx(1.0));
  CHECK(rep.beta_one_certified);
  for (const auto& row : rep.rows) CHECK(row.rho < 1.0);
}

TEST_CASE("spectral_report matches direct network computation") {
  const auto rep = spectral_report(TopologyKind::Linear, 20);
  CHECK(rep.n == 20);
  CHECK(rep.connected);
  const auto edges = build_topology(TopologyKind::Linear, 20);
  CHECK(rep.edge_count == edges.edges.size());
  CHECK(rep.sigma == doctest::Approx(WeightMatrix::from_edges(edges).sigma()).epsilon(1e-14));
}
