// Acceptance suite: one pass/fail line per criterion, exit code is the
// number of failed criteria. Shares the default instance and its reference
// equilibrium across criteria to keep the total runtime low.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nag/cournot.hpp"
#include "nag/errors.hpp"
#include "nag/harness.hpp"
#include "nag/network.hpp"
#include "nag/oracle.hpp"
#include "nag/rng.hpp"
#include "nag/solver.hpp"

using namespace nag;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const char* title, bool ok, double elapsed) {
  std::printf("%s %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", index, title, elapsed);
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct Defaults {
  GameInstance game;
  ReferenceSolution reference;
  MonotonicityConstants constants;
  Eigen::MatrixXd X0;
};

Defaults make_defaults() {
  GameInstance game = build_cournot(20, 10, 1, 500.0);
  ReferenceSolution ref = solve_reference(game, 1e-12);
  MonotonicityConstants ml = game.monotonicity_constants();
  Eigen::MatrixXd X0(20, 20);
  for (int i = 0; i < 20; ++i)
    X0.row(i) = game.feasible_set(i).project(Eigen::VectorXd::Zero(20)).transpose();
  return Defaults{std::move(game), std::move(ref), ml, std::move(X0)};
}

// Criterion 1: Sum v == Sum x per coordinate along every iteration.
void criterion_aggregate_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
    const GameInstance game = build_cournot(20, 10, seed, 500.0);
    const auto W = WeightMatrix::from_edges(build_topology(TopologyKind::Linear, 20));
    Eigen::MatrixXd X0(20, 20);
    for (int i = 0; i < 20; ++i)
      X0.row(i) = game.feasible_set(i).project(Eigen::VectorXd::Zero(20)).transpose();
    SolverConfig cfg;
    cfg.alpha = 0.02;
    cfg.beta = 0.9;
    cfg.max_iters = 300;
    auto observer = [&](const SolverState& s) {
      const Eigen::VectorXd sx = s.X.colwise().sum();
      const Eigen::VectorXd sv = s.V.colwise().sum();
      for (int j = 0; j < sx.size(); ++j)
        if (std::abs(sv[j] - sx[j]) > 1e-8 * (1.0 + std::abs(sx[j]))) ok = false;
    };
    run_algorithm1(game, W, cfg, X0, nullptr, observer);
  }
  const double dt = seconds_since(t0);
  report(1, "aggregate conservation on 10 instances, 300 steps each", ok && dt < 10.0, dt);
}

struct TunedRun {
  double alpha = 0.0, beta = 0.0;
  ConvergenceTrace trace;
};

// Best (alpha, beta) over a beta grid with the tuner, on the given topology.
TunedRun tuned_run(const Defaults& d, const WeightMatrix& W, int max_iters) {
  TunerConfig tuner;
  TunedRun best;
  double best_gap = std::numeric_limits<double>::infinity();
  ExperimentSetup setup{d.game, W, d.X0, d.reference, d.constants};
  for (double beta : {0.5, 0.7, 0.9, 1.0}) {
    const double alpha = tune_alpha(setup, beta, max_iters, tuner);
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.max_iters = max_iters;
    ConvergenceTrace t = run_algorithm1(d.game, W, cfg, d.X0, &d.reference.x_star);
    if (t.status != RunStatus::Diverged && t.final_gap() < best_gap) {
      best_gap = t.final_gap();
      best = TunedRun{alpha, beta, std::move(t)};
    }
  }
  return best;
}

// Criterion 2: tuned run on the default instance converges linearly.
void criterion_linear_convergence(const Defaults& d, TunedRun& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto W = WeightMatrix::from_edges(build_topology(TopologyKind::Linear, 20));
  out = tuned_run(d, W, 200);
  bool ok = !out.trace.records.empty();
  if (ok) {
    ok = out.trace.final_gap() <= 1e-3;
    ok = ok && out.trace.fitted_rate(50, 200) < 0.97;
    for (size_t k = 21; k < out.trace.records.size(); ++k)
      ok = ok && out.trace.records[k].gap <= out.trace.records[k - 1].gap * (1.0 + 1e-9);
  }
  const double dt = seconds_since(t0);
  report(2, "linear convergence with tuned steps on the default instance", ok && dt < 30.0, dt);
}

// Criterion 3: sigma and empirical rates order complete < log < linear.
void criterion_topology_ordering(const Defaults& d) {
  const auto t0 = std::chrono::steady_clock::now();
  double sigma[3], rate[3];
  const TopologyKind kinds[3] = {TopologyKind::Complete, TopologyKind::Log,
                                 TopologyKind::Linear};
  for (int t = 0; t < 3; ++t) {
    const auto W = WeightMatrix::from_edges(build_topology(kinds[t], 20));
    sigma[t] = W.sigma();
    rate[t] = tuned_run(d, W, 200).trace.fitted_rate(50, 200);
  }
  const bool ok = sigma[0] < sigma[1] && sigma[1] < sigma[2] && sigma[2] < 1.0 &&
                  rate[0] < rate[1] && rate[1] < rate[2] && rate[2] < 1.0;
  const double dt = seconds_since(t0);
  report(3, "sigma and empirical rate ordering across topologies", ok && dt < 60.0, dt);
}

// Criterion 4: the two-dimensional linear inequality certificate holds.
void criterion_certificate(const Defaults& d) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (auto kind : {TopologyKind::Complete, TopologyKind::Log, TopologyKind::Linear}) {
    const auto W = WeightMatrix::from_edges(build_topology(kind, 20));
    const double sigma = W.sigma();
    const double mu = d.constants.mu, L = d.constants.lipschitz;
    const double beta = 0.5 * beta_max_bound(mu, L, sigma);
    const double alpha = 0.5 * alpha_max_bound(mu, L, sigma, beta);
    if (!(alpha > 0.0)) { ok = false; continue; }
    const TheoryConstants tc = theory_constants(alpha, beta, mu, L, sigma);
    ok = ok && tc.certificate_applies && tc.rho < tc.rate_bound && tc.rate_bound < 1.0;

    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.max_iters = 500;
    const auto trace = run_algorithm1(d.game, W, cfg, d.X0, &d.reference.x_star);
    for (size_t k = 1; k < trace.records.size(); ++k) {
      const auto& prev = trace.records[k - 1];
      const auto& cur = trace.records[k];
      const Eigen::Vector2d bound = tc.M * Eigen::Vector2d(prev.zeta1, prev.zeta2);
      if (cur.zeta1 > bound[0] * (1.0 + 1e-8) + 1e-12) ok = false;
      if (cur.zeta2 > bound[1] * (1.0 + 1e-8) + 1e-12) ok = false;
    }
  }
  report(4, "rate certificate holds over 500 steps on all topologies", ok, seconds_since(t0));
}

// Criterion 5: closed-form spectral radius vs. a generic eigensolve.
void criterion_spectral_radius() {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(2024);
  bool ok = true;
  int tested = 0;
  while (tested < 1000) {
    const double mu = rng.uniform(0.1, 5.0);
    const double L = mu * rng.uniform(1.0, 20.0);
    const double sigma = rng.uniform(0.0, 0.95);
    const double bmax = beta_max_bound(mu, L, sigma);
    const double beta = rng.uniform(0.1, 0.9) * bmax;
    const double amax = alpha_max_bound(mu, L, sigma, beta);
    if (!(amax > 0.0)) continue;
    const double alpha = rng.uniform(0.1, 0.9) * amax;
    const TheoryConstants tc = theory_constants(alpha, beta, mu, L, sigma);
    const Eigen::EigenSolver<Eigen::Matrix2d> es(tc.M);
    const double generic = es.eigenvalues().cwiseAbs().maxCoeff();
    if (std::abs(tc.rho - generic) > 1e-12) ok = false;
    ++tested;
  }
  report(5, "closed-form spectral radius matches eigensolver on 1000 tuples", ok,
         seconds_since(t0));
}

// Criterion 6: projection vs. KKT oracle, plus nonexpansiveness at p = 20.
void criterion_projection_oracle(const Defaults& d) {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(77);
  bool ok = true;
  int tested = 0;
  while (tested < 10000) {
    const int dim = 2 + int(rng.next() % 2);
    Eigen::VectorXd lo(dim), hi(dim), a(dim), y(dim);
    for (int j = 0; j < dim; ++j) {
      lo[j] = rng.uniform(-4.0, 0.0);
      hi[j] = rng.uniform(0.1, 4.0);
      a[j] = rng.uniform(-2.0, 2.0);
      y[j] = rng.uniform(-8.0, 8.0);
    }
    if (a.norm() < 0.2) continue;
    const double b = rng.uniform(-2.0, 2.0);
    std::optional<FeasibleSet> set;
    try {
      set = FeasibleSet::box_hyperplane(lo, hi, a, b);
    } catch (const ConfigError&) {
      continue;
    }
    if ((set->project(y) - brute_force_project(*set, y)).norm() > 1e-9) ok = false;
    ++tested;
  }
  const FeasibleSet& cournot_set = d.game.feasible_set(0);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd y1(20), y2(20);
    for (int j = 0; j < 20; ++j) {
      y1[j] = rng.uniform(-200.0, 700.0);
      y2[j] = rng.uniform(-200.0, 700.0);
    }
    const double dproj = (cournot_set.project(y1) - cournot_set.project(y2)).norm();
    if (dproj > (y1 - y2).norm() + 1e-12) ok = false;
  }
  report(6, "projection matches the KKT oracle and is nonexpansive", ok, seconds_since(t0));
}

// Criterion 7: analytic coordinate gradients vs. central differences.
void criterion_gradient_consistency(const Defaults& d) {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(99);
  bool ok = true;
  const int p = d.game.action_dim();
  for (int t = 0; t < 1000; ++t) {
    const int i = int(rng.next() % d.game.num_players());
    Eigen::VectorXd xi(p), z(p);
    for (int j = 0; j < p; ++j) {
      xi[j] = rng.uniform(0.0, 400.0);
      z[j] = rng.uniform(0.0, 400.0);
    }
    const Eigen::VectorXd grad = d.game.eval_grad(i, xi, z);
    const int j = int(rng.next() % p);
    const double h = 1e-4 * (1.0 + std::abs(xi[j]));
    Eigen::VectorXd xp = xi, xm = xi;
    xp[j] += h;
    xm[j] -= h;
    // Perturbing x_i also moves the aggregate by h / n in coordinate j.
    Eigen::VectorXd zp = z, zm = z;
    zp[j] += h / d.game.num_players();
    zm[j] -= h / d.game.num_players();
    const double fd = (d.game.eval_cost(i, xp, zp) - d.game.eval_cost(i, xm, zm)) / (2.0 * h);
    if (std::abs(fd - grad[j]) > 1e-6 * (1.0 + std::abs(grad[j]))) ok = false;
  }
  report(7, "coordinate gradients match finite differences", ok, seconds_since(t0));
}

// Criterion 8: consensus contraction with factor sigma on all topologies.
void criterion_consensus_contraction() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (auto kind : {TopologyKind::Complete, TopologyKind::Log, TopologyKind::Linear}) {
    const auto W = WeightMatrix::from_edges(build_topology(kind, 20));
    const double sigma = W.sigma();
    SplitMix64 rng(314);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd w(20);
      for (int j = 0; j < 20; ++j) w[j] = rng.uniform(-100.0, 100.0);
      const Eigen::VectorXd dev = w.array() - w.mean();
      const Eigen::VectorXd mixed_dev = (W.matrix() * w).array() - w.mean();
      if (mixed_dev.norm() > sigma * dev.norm() + 1e-12) ok = false;
    }
  }
  report(8, "consensus averaging contracts deviations by sigma", ok, seconds_since(t0));
}

// Criterion 9: the diminishing-step baseline trails by at least 10x.
void criterion_baseline_inferiority(const Defaults& d, const TunedRun& tuned) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto W = WeightMatrix::from_edges(build_topology(TopologyKind::Linear, 20));
  // Give the baseline its own tuned initial step.
  double best_gap = std::numeric_limits<double>::infinity();
  for (double alpha0 : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) {
    const auto t = run_diminishing_baseline(d.game, W, alpha0, 200, d.X0, &d.reference.x_star);
    if (t.status != RunStatus::Diverged) best_gap = std::min(best_gap, t.final_gap());
  }
  const bool ok = best_gap >= 10.0 * tuned.trace.final_gap();
  report(9, "diminishing-step baseline trails the tuned run by 10x", ok, seconds_since(t0));
}

// Criterion 10: byte-identical trace files for identical configs.
void criterion_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  auto read_all = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  ExperimentConfig cfg;
  cfg.game.n = 8;
  cfg.game.L = 2;
  cfg.solver.max_iters = 200;
  cfg.output_path = "/tmp/nag_accept_run1.csv";
  run_experiment(cfg);
  cfg.output_path = "/tmp/nag_accept_run2.csv";
  run_experiment(cfg);
  const std::string a = read_all("/tmp/nag_accept_run1.csv");
  const bool ok = !a.empty() && a == read_all("/tmp/nag_accept_run2.csv");
  report(10, "identical configs write byte-identical traces", ok, seconds_since(t0));
}

}  // namespace

int main() {
  const Defaults d = make_defaults();
  TunedRun tuned;
  criterion_aggregate_conservation();
  criterion_linear_convergence(d, tuned);
  criterion_topology_ordering(d);
  criterion_certificate(d);
  criterion_spectral_radius();
  criterion_projection_oracle(d);
  criterion_gradient_consistency(d);
  criterion_consensus_contraction();
  criterion_baseline_inferiority(d, tuned);
  criterion_determinism();
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
