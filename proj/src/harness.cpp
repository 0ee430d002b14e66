#include "nag/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nag/cournot.hpp"
#include "nag/errors.hpp"
#include "nag/rng.hpp"

namespace nag {

void ExperimentConfig::validate() const {
  if (game.n < 2 || game.L < 1) throw ConfigError("config: need game.n >= 2 and game.L >= 1");
  if (!(game.cap > 0.0)) throw ConfigError("config: game.cap must be positive");
  solver.validate();
  if (!(tuner.alpha_min > 0.0) || !(tuner.alpha_max > tuner.alpha_min))
    throw ConfigError("config: tuner alpha range invalid");
  if (tuner.grid_size < 2) throw ConfigError("config: tuner.grid_size must be >= 2");
  if (tuner.refine_rounds < 0) throw ConfigError("config: tuner.refine_rounds negative");
}

namespace {

using nlohmann::json;

template <typename T>
void maybe_get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("game")) {
    const auto& g = j.at("game");
    maybe_get(g, "n", cfg.game.n);
    maybe_get(g, "L", cfg.game.L);
    maybe_get(g, "cap", cfg.game.cap);
    maybe_get(g, "seed", cfg.game.seed);
  }
  if (j.contains("topology")) {
    std::string kind = "linear";
    maybe_get(j.at("topology"), "kind", kind);
    cfg.topology = parse_topology(kind);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    maybe_get(s, "alpha", cfg.solver.alpha);
    maybe_get(s, "beta", cfg.solver.beta);
    maybe_get(s, "max_iters", cfg.solver.max_iters);
    maybe_get(s, "gap_tolerance", cfg.solver.gap_tolerance);
    if (s.contains("schedule")) {
      const std::string sched = s.at("schedule").get<std::string>();
      if (sched == "fixed") cfg.solver.schedule = StepSchedule::Fixed;
      else if (sched == "diminishing") cfg.solver.schedule = StepSchedule::Diminishing;
      else throw ConfigError("config: unknown solver.schedule '" + sched + "'");
    }
    maybe_get(s, "diminishing_exponent", cfg.solver.diminishing_exponent);
  }
  if (j.contains("tuner")) {
    const auto& t = j.at("tuner");
    maybe_get(t, "alpha_min", cfg.tuner.alpha_min);
    maybe_get(t, "alpha_max", cfg.tuner.alpha_max);
    maybe_get(t, "grid_size", cfg.tuner.grid_size);
    maybe_get(t, "refine_rounds", cfg.tuner.refine_rounds);
  }
  if (j.contains("init")) {
    const std::string init = j.at("init").get<std::string>();
    if (init == "zero") cfg.init = InitKind::Zero;
    else if (init == "random") cfg.init = InitKind::Random;
    else throw ConfigError("config: unknown init '" + init + "'");
  }
  if (j.contains("output")) maybe_get(j.at("output"), "path", cfg.output_path);
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int max_workers() {
  if (const char* env = std::getenv("NAG_MAX_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<int>(static_cast<int>(hw ? hw : 1), 1, 16);
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_trace(const std::string& path,
                 const std::vector<std::pair<std::string, std::string>>& header,
                 const ConvergenceTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("write_trace: cannot open " + path);
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << "\n";
  out << "iteration,gap,consensus_error,zeta1,zeta2\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_float(r.gap) << ',' << format_float(r.consensus_error)
        << ',' << format_float(r.zeta1) << ',' << format_float(r.zeta2) << "\n";
  }
  if (!out) throw ConfigError("write_trace: write failed for " + path);
}

ExperimentSetup prepare_experiment(const ExperimentConfig& config, double reference_tol) {
  config.validate();
  GameInstance game = build_cournot(config.game.n, config.game.L, config.game.seed,
                                    config.game.cap);
  const EdgeSet edges = build_topology(config.topology, config.game.n);
  if (!is_connected(edges))
    throw ConfigError("topology is disconnected; solver assumptions do not hold");
  WeightMatrix W = WeightMatrix::from_edges(edges);

  const int n = game.num_players(), p = game.action_dim();
  Eigen::MatrixXd X0(n, p);
  if (config.init == InitKind::Zero) {
    for (int i = 0; i < n; ++i)
      X0.row(i) = game.feasible_set(i).project(Eigen::VectorXd::Zero(p)).transpose();
  } else {
    SplitMix64 rng(config.game.seed ^ 0xd1b54a32d192ed03ULL);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd y(p);
      for (int j = 0; j < p; ++j) y[j] = rng.uniform(0.0, 10.0);
      X0.row(i) = game.feasible_set(i).project(y).transpose();
    }
  }

  ReferenceSolution reference = solve_reference(game, reference_tol);
  MonotonicityConstants constants = game.monotonicity_constants();
  return ExperimentSetup{std::move(game), std::move(W), std::move(X0), std::move(reference),
                         constants};
}

namespace {

std::vector<std::pair<std::string, std::string>> base_header(const ExperimentConfig& config,
                                                             const ExperimentSetup& setup,
                                                             const std::string& method,
                                                             double alpha, double beta) {
  std::vector<std::pair<std::string, std::string>> h;
  h.emplace_back("method", method);
  h.emplace_back("game.n", std::to_string(config.game.n));
  h.emplace_back("game.L", std::to_string(config.game.L));
  h.emplace_back("game.seed", std::to_string(config.game.seed));
  h.emplace_back("game.cap", format_float(config.game.cap));
  h.emplace_back("topology.kind", std::string(topology_name(config.topology)));
  h.emplace_back("solver.alpha", format_float(alpha));
  h.emplace_back("solver.beta", format_float(beta));
  h.emplace_back("solver.max_iters", std::to_string(config.solver.max_iters));
  h.emplace_back("sigma", format_float(setup.W.sigma()));
  h.emplace_back("mu", format_float(setup.constants.mu));
  h.emplace_back("L", format_float(setup.constants.lipschitz));
  return h;
}

ExperimentResult finish_result(const ExperimentConfig& config, const ExperimentSetup& setup,
                               ConvergenceTrace trace, const std::string& method,
                               double alpha, double beta, const std::string& output_path) {
  if (trace.status == RunStatus::Diverged)
    throw NumericError("solver diverged; reduce the step sizes");
  ExperimentResult res;
  res.sigma = setup.W.sigma();
  res.constants = setup.constants;
  if (method == "algorithm1") {
    res.theory = theory_constants(alpha, beta, setup.constants.mu, setup.constants.lipschitz,
                                  setup.W.sigma());
  }
  const int last = trace.records.back().iteration;
  res.fitted_rate = trace.fitted_rate(std::max(0, last - 150), last);
  if (!output_path.empty()) {
    auto header = base_header(config, setup, method, alpha, beta);
    if (res.theory) {
      header.emplace_back("rho", format_float(res.theory->rho));
      header.emplace_back("rate_bound", format_float(res.theory->rate_bound));
    }
    write_trace(output_path, header, trace);
  }
  res.trace = std::move(trace);
  return res;
}

// Parallel map over indices with the NAG_MAX_WORKERS cap; results keep
// their index order regardless of scheduling.
template <typename Fn>
std::vector<double> parallel_eval(int count, Fn&& fn) {
  const int workers = std::min(max_workers(), std::max(1, count));
  std::vector<double> out(count);
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const ExperimentSetup setup = prepare_experiment(config);
  ConvergenceTrace trace = run_algorithm1(setup.game, setup.W, config.solver, setup.X0,
                                          &setup.reference.x_star);
  const char* method =
      config.solver.schedule == StepSchedule::Diminishing ? "diminishing" : "algorithm1";
  return finish_result(config, setup, std::move(trace), method, config.solver.alpha,
                       config.solver.beta, config.output_path);
}

double tune_alpha(const ExperimentSetup& setup, double beta, int max_iters,
                  const TunerConfig& tuner) {
  double lo = tuner.alpha_min, hi = tuner.alpha_max;
  double best_alpha = lo;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= tuner.refine_rounds; ++round) {
    const int m = tuner.grid_size;
    std::vector<double> alphas(m);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < m; ++i) alphas[i] = lo * std::exp(ratio * i / (m - 1));
    const std::vector<double> gaps = parallel_eval(m, [&](int i) {
      SolverConfig cfg;
      cfg.alpha = alphas[i];
      cfg.beta = beta;
      cfg.max_iters = max_iters;
      const ConvergenceTrace t =
          run_algorithm1(setup.game, setup.W, cfg, setup.X0, &setup.reference.x_star);
      if (t.status == RunStatus::Diverged) return std::numeric_limits<double>::infinity();
      return t.final_gap();
    });
    int best_i = 0;
    for (int i = 0; i < m; ++i) {
      if (gaps[i] < gaps[best_i]) best_i = i;
      if (gaps[i] < best_gap) {
        best_gap = gaps[i];
        best_alpha = alphas[i];
      }
    }
    // Narrow to the neighbors of the incumbent for the next round.
    const double step = std::exp(ratio / (m - 1));
    lo = alphas[best_i] / step;
    hi = alphas[best_i] * step;
  }
  if (!std::isfinite(best_gap))
    throw NumericError("tune_alpha: every candidate step size diverged");
  return best_alpha;
}

std::vector<BetaSweepRow> run_beta_sweep(const ExperimentConfig& config,
                                         const std::vector<double>& betas) {
  for (double beta : betas)
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta-sweep: beta must be in (0, 1]");
  const ExperimentSetup setup = prepare_experiment(config);
  std::vector<BetaSweepRow> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    BetaSweepRow row;
    row.beta = beta;
    row.alpha = tune_alpha(setup, beta, config.solver.max_iters, config.tuner);
    SolverConfig cfg = config.solver;
    cfg.alpha = row.alpha;
    cfg.beta = beta;
    cfg.schedule = StepSchedule::Fixed;
    const ConvergenceTrace t =
        run_algorithm1(setup.game, setup.W, cfg, setup.X0, &setup.reference.x_star);
    row.gap_final = t.final_gap();
    rows.push_back(row);
  }
  return rows;
}

CompareResult run_compare(const ExperimentConfig& config) {
  const ExperimentSetup setup = prepare_experiment(config);
  auto with_suffix = [&](const char* suffix) -> std::string {
    if (config.output_path.empty()) return {};
    const auto dot = config.output_path.rfind('.');
    if (dot == std::string::npos) return config.output_path + suffix;
    return config.output_path.substr(0, dot) + suffix + config.output_path.substr(dot);
  };

  CompareResult res{ExperimentResult{}, ExperimentResult{}};
  SolverConfig fixed = config.solver;
  fixed.schedule = StepSchedule::Fixed;
  ConvergenceTrace t1 =
      run_algorithm1(setup.game, setup.W, fixed, setup.X0, &setup.reference.x_star);
  res.algorithm1 = finish_result(config, setup, std::move(t1), "algorithm1", fixed.alpha,
                                 fixed.beta, with_suffix(".alg1"));

  ConvergenceTrace t2 = run_diminishing_baseline(setup.game, setup.W, config.solver.alpha,
                                                 config.solver.max_iters, setup.X0,
                                                 &setup.reference.x_star);
  res.baseline = finish_result(config, setup, std::move(t2), "diminishing", config.solver.alpha,
                               1.0, with_suffix(".baseline"));
  return res;
}

BoundsReport bounds_report(double mu, double L, double sigma, int samples) {
  BoundsReport rep;
  rep.mu = mu;
  rep.lipschitz = L;
  rep.sigma = sigma;
  rep.beta_max = beta_max_bound(mu, L, sigma);
  rep.beta_one_certified = rep.beta_max >= 1.0;
  for (int i = 1; i <= samples; ++i) {
    BoundsRow row;
    // Stay strictly inside the region; the boundary degenerates to alpha = 0.
    row.beta = rep.beta_max * i / (samples + 1);
    row.alpha = 0.5 * alpha_max_bound(mu, L, sigma, row.beta);
    if (!(row.alpha > 0.0)) continue;
    const TheoryConstants t = theory_constants(row.alpha, row.beta, mu, L, sigma);
    row.rho = t.rho;
    row.rate_bound = t.rate_bound;
    rep.rows.push_back(row);
  }
  return rep;
}

SpectralReport spectral_report(TopologyKind kind, int n) {
  SpectralReport rep;
  rep.kind = kind;
  rep.n = n;
  const EdgeSet edges = build_topology(kind, n);
  rep.edge_count = edges.edges.size();
  rep.connected = is_connected(edges);
  rep.sigma = rep.connected ? WeightMatrix::from_edges(edges).sigma() : 1.0;
  return rep;
}

}  // namespace nag
