#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nag/game.hpp"
#include "nag/network.hpp"
#include "nag/oracle.hpp"
#include "nag/solver.hpp"

namespace nag {

struct GameConfig {
  int n = 20;
  int L = 10;
  double cap = 500.0;
  std::uint64_t seed = 1;
};

struct TunerConfig {
  double alpha_min = 1e-3;
  double alpha_max = 0.5;
  int grid_size = 13;
  int refine_rounds = 1;
};

enum class InitKind { Zero, Random };

struct ExperimentConfig {
  GameConfig game;
  TopologyKind topology = TopologyKind::Linear;
  SolverConfig solver;
  TunerConfig tuner;
  InitKind init = InitKind::Zero;
  std::string output_path;  // empty: no file written

  void validate() const;
};

// Reads the JSON config (keys game.n, game.L, game.seed, game.cap,
// topology.kind, solver.alpha, solver.beta, solver.schedule,
// solver.max_iters, solver.gap_tolerance, tuner.*, output.path).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Prepared experiment inputs shared by the subcommands.
struct ExperimentSetup {
  GameInstance game;
  WeightMatrix W;
  Eigen::MatrixXd X0;
  ReferenceSolution reference;
  MonotonicityConstants constants;
};

ExperimentSetup prepare_experiment(const ExperimentConfig& config,
                                   double reference_tol = 1e-12);

struct ExperimentResult {
  ConvergenceTrace trace;
  double sigma = 0.0;
  MonotonicityConstants constants;
  std::optional<TheoryConstants> theory;
  double fitted_rate = 0.0;  // geometric factor over the last 150 iterations
};

// Builds instance / topology / reference, runs the configured solver and
// writes the trace file when output_path is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CompareResult {
  ExperimentResult algorithm1;
  ExperimentResult baseline;
};

// Algorithm 1 with fixed steps vs. the diminishing-step baseline on the
// identical instance, topology and initial point. Trace files get
// ".alg1" / ".baseline" inserted before the extension.
CompareResult run_compare(const ExperimentConfig& config);

struct BetaSweepRow {
  double beta = 0.0;
  double alpha = 0.0;    // tuned
  double gap_final = 0.0;
};

// Two-stage log-grid search over alpha minimizing the gap at max_iters.
double tune_alpha(const ExperimentSetup& setup, double beta, int max_iters,
                  const TunerConfig& tuner);

std::vector<BetaSweepRow> run_beta_sweep(const ExperimentConfig& config,
                                         const std::vector<double>& betas);

struct BoundsRow {
  double beta = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double rate_bound = 0.0;
};

struct BoundsReport {
  double mu = 0.0, lipschitz = 0.0, sigma = 0.0;
  double beta_max = 0.0;
  bool beta_one_certified = false;
  std::vector<BoundsRow> rows;
};

BoundsReport bounds_report(double mu, double L, double sigma, int samples = 5);

struct SpectralReport {
  TopologyKind kind;
  int n = 0;
  std::size_t edge_count = 0;
  bool connected = false;
  double sigma = 0.0;
};

SpectralReport spectral_report(TopologyKind kind, int n);

// Trace file: '#'-prefixed "key: value" header lines, then CSV rows
// iteration,gap,consensus_error,zeta1,zeta2. Floats use scientific
// notation with 17 significant digits so files are byte-reproducible.
void write_trace(const std::string& path, const std::vector<std::pair<std::string, std::string>>& header,
                 const ConvergenceTrace& trace);
std::string format_float(double v);

// Worker cap for sweep/tuner parallelism, from NAG_MAX_WORKERS.
int max_workers();

}  // namespace nag
