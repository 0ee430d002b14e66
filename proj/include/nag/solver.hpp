#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "nag/game.hpp"
#include "nag/network.hpp"

namespace nag {

enum class StepSchedule { Fixed, Diminishing };

struct SolverConfig {
  double alpha = 0.05;          // gradient step size
  double beta = 1.0;            // relaxation step size, in (0, 1]
  int max_iters = 200;
  double gap_tolerance = 0.0;   // 0 disables the tolerance stop
  StepSchedule schedule = StepSchedule::Fixed;
  double diminishing_exponent = 1.0;  // alpha_k = alpha / (k+1)^exponent

  void validate() const;
};

// Actions and aggregate trackers, one row per player.
struct SolverState {
  Eigen::MatrixXd X;  // n x p actions
  Eigen::MatrixXd V;  // n x p trackers
  int iteration = 0;
};

struct TraceRecord {
  int iteration = 0;
  double gap = 0.0;              // ||x^k - x*|| (NaN without a reference)
  double consensus_error = 0.0;  // ||V - 1 xbar^T||_F
  double zeta1 = 0.0;            // ||X - X*||_F^2
  double zeta2 = 0.0;            // ||V - 1 xbar^T||_F^2
  double alpha_used = 0.0;       // step size applied to reach this iterate
};

enum class RunStatus { MaxIters, Converged, Diverged };

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::MaxIters;

  double final_gap() const;
  // Least-squares geometric factor of the gap over iterations [k0, k1].
  double fitted_rate(int k0, int k1) const;
};

// One synchronous round: all players read the iteration-k state.
SolverState step_algorithm1(const SolverState& state, const GameInstance& game,
                            const WeightMatrix& W, double alpha, double beta);

// Centralized fixed-point step with the exact aggregate.
Eigen::VectorXd step_centralized(const Eigen::VectorXd& x_stacked, const GameInstance& game,
                                 double alpha);

using StepObserver = std::function<void(const SolverState&)>;

// Runs Algorithm 1 from X0 (rows projected onto the players' sets,
// trackers initialized to the actions). Stops on max_iters, on
// gap <= gap_tolerance when x_star is given, or on the natural residual
// otherwise. Aborts with Diverged when the gap grows 1e6x from its minimum.
ConvergenceTrace run_algorithm1(const GameInstance& game, const WeightMatrix& W,
                                const SolverConfig& config, const Eigen::MatrixXd& X0,
                                const Eigen::VectorXd* x_star = nullptr,
                                const StepObserver& observer = {});

// beta = 1 with alpha_k = alpha0 / (k+1)^exponent.
ConvergenceTrace run_diminishing_baseline(const GameInstance& game, const WeightMatrix& W,
                                          double alpha0, int max_iters,
                                          const Eigen::MatrixXd& X0,
                                          const Eigen::VectorXd* x_star = nullptr,
                                          const StepObserver& observer = {},
                                          double exponent = 1.0);

// Constants of the 2x2 linear system inequality governing
// (||X - X*||_F^2, ||V - 1 xbar^T||_F^2) and its spectral radius.
struct TheoryConstants {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  Eigen::Matrix2d M;
  double rho = 0.0;         // spectral radius of M
  double rate_bound = 0.0;  // 1 - (alpha beta / 2)(mu - 2 alpha Lbar^2 - ...)
  bool certificate_applies = false;  // a > 0 and rho < 1
};

TheoryConstants theory_constants(double alpha, double beta, double mu, double L, double sigma);

// Step-size region guaranteeing rho(M) < 1. sigma = 0 gives beta_max = 1
// and alpha_max = mu / (2 Lbar^2).
double beta_max_bound(double mu, double L, double sigma);
double alpha_max_bound(double mu, double L, double sigma, double beta);

// Helpers between the n x p matrix layout and the stacked np vector.
Eigen::VectorXd stack_rows(const Eigen::MatrixXd& X);
Eigen::MatrixXd unstack_rows(const Eigen::VectorXd& x, int n, int p);

}  // namespace nag
