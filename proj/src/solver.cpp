#include "nag/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "nag/errors.hpp"

namespace nag {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceFactor = 1e6;
}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("SolverConfig: alpha must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("SolverConfig: beta must be in (0, 1]");
  if (max_iters < 0) throw ConfigError("SolverConfig: negative max_iters");
  if (gap_tolerance < 0.0) throw ConfigError("SolverConfig: negative gap_tolerance");
  if (schedule == StepSchedule::Diminishing) {
    if (beta != 1.0) throw ConfigError("SolverConfig: diminishing schedule requires beta = 1");
    if (!(diminishing_exponent > 0.5 && diminishing_exponent <= 1.0))
      throw ConfigError("SolverConfig: diminishing exponent must be in (0.5, 1]");
  }
}

Eigen::VectorXd stack_rows(const Eigen::MatrixXd& X) {
  Eigen::VectorXd x(X.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    x.segment(i * X.cols(), X.cols()) = X.row(i).transpose();
  return x;
}

Eigen::MatrixXd unstack_rows(const Eigen::VectorXd& x, int n, int p) {
  if (x.size() != static_cast<Eigen::Index>(n) * p) throw ConfigError("unstack_rows: wrong size");
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i) X.row(i) = x.segment(i * p, p).transpose();
  return X;
}

double ConvergenceTrace::final_gap() const {
  return records.empty() ? kNaN : records.back().gap;
}

double ConvergenceTrace::fitted_rate(int k0, int k1) const {
  double sk = 0, sk2 = 0, sy = 0, sky = 0;
  int m = 0;
  for (const auto& r : records) {
    if (r.iteration < k0 || r.iteration > k1) continue;
    if (!(r.gap > 0.0) || !std::isfinite(r.gap)) continue;
    const double y = std::log(r.gap);
    sk += r.iteration;
    sk2 += double(r.iteration) * r.iteration;
    sy += y;
    sky += r.iteration * y;
    ++m;
  }
  if (m < 2) return kNaN;
  const double denom = m * sk2 - sk * sk;
  if (denom == 0.0) return kNaN;
  return std::exp((m * sky - sk * sy) / denom);
}

SolverState step_algorithm1(const SolverState& state, const GameInstance& game,
                            const WeightMatrix& W, double alpha, double beta) {
  const int n = game.num_players(), p = game.action_dim();
  if (state.X.rows() != n || state.X.cols() != p || state.V.rows() != n || state.V.cols() != p)
    throw ConfigError("step_algorithm1: state dimension mismatch");
  if (W.size() != n) throw ConfigError("step_algorithm1: weight matrix size mismatch");

  const Eigen::MatrixXd Vhat = W.matrix() * state.V;
  Eigen::MatrixXd Xhat(n, p);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = state.X.row(i).transpose();
    const Eigen::VectorXd grad = game.eval_grad(i, xi, Vhat.row(i).transpose());
    Xhat.row(i) = game.feasible_set(i).project(xi - alpha * grad).transpose();
  }
  SolverState next;
  next.X = state.X + beta * (Xhat - state.X);
  next.V = Vhat + next.X - state.X;
  next.iteration = state.iteration + 1;
  return next;
}

Eigen::VectorXd step_centralized(const Eigen::VectorXd& x_stacked, const GameInstance& game,
                                 double alpha) {
  if (alpha < 0.0) throw ConfigError("step_centralized: negative alpha");
  const int n = game.num_players(), p = game.action_dim();
  const Eigen::VectorXd z = game.aggregate(x_stacked);
  Eigen::VectorXd out(x_stacked.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = x_stacked.segment(i * p, p);
    out.segment(i * p, p) = game.feasible_set(i).project(xi - alpha * game.eval_grad(i, xi, z));
  }
  return out;
}

namespace {

TraceRecord make_record(const SolverState& state, const Eigen::VectorXd* x_star,
                        double alpha_used) {
  TraceRecord r;
  r.iteration = state.iteration;
  r.alpha_used = alpha_used;
  const Eigen::RowVectorXd xbar = state.X.colwise().mean();
  const Eigen::MatrixXd dev = state.V.rowwise() - xbar;
  r.consensus_error = dev.norm();
  r.zeta2 = dev.squaredNorm();
  if (x_star) {
    const Eigen::VectorXd diff = stack_rows(state.X) - *x_star;
    r.gap = diff.norm();
    r.zeta1 = diff.squaredNorm();
  } else {
    r.gap = kNaN;
    r.zeta1 = kNaN;
  }
  return r;
}

ConvergenceTrace run_impl(const GameInstance& game, const WeightMatrix& W,
                          const SolverConfig& config, const Eigen::MatrixXd& X0,
                          const Eigen::VectorXd* x_star, const StepObserver& observer) {
  config.validate();
  const int n = game.num_players(), p = game.action_dim();
  if (X0.rows() != n || X0.cols() != p) throw ConfigError("run: X0 dimension mismatch");
  if (x_star && x_star->size() != static_cast<Eigen::Index>(n) * p)
    throw ConfigError("run: x_star dimension mismatch");

  SolverState state;
  state.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    state.X.row(i) = game.feasible_set(i).project(X0.row(i).transpose()).transpose();
  state.V = state.X;
  state.iteration = 0;

  const bool check_residual = (x_star == nullptr) && config.gap_tolerance > 0.0;
  auto natural_residual = [&](const SolverState& s) {
    const Eigen::VectorXd x = stack_rows(s.X);
    return (x - step_centralized(x, game, config.alpha)).norm();
  };

  ConvergenceTrace trace;
  trace.records.push_back(make_record(state, x_star, 0.0));
  if (observer) observer(state);

  double best_metric = std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.max_iters; ++k) {
    double alpha_k = config.alpha;
    if (config.schedule == StepSchedule::Diminishing)
      alpha_k = config.alpha / std::pow(double(k + 1), config.diminishing_exponent);

    state = step_algorithm1(state, game, W, alpha_k, config.beta);
    trace.records.push_back(make_record(state, x_star, alpha_k));
    if (observer) observer(state);

    double metric = kNaN;
    if (x_star) {
      metric = trace.records.back().gap;
    } else if (check_residual) {
      metric = natural_residual(state);
    }
    if (x_star || check_residual) {
      if (!std::isfinite(metric)) {
        trace.status = RunStatus::Diverged;
        return trace;
      }
      if (config.gap_tolerance > 0.0 && metric <= config.gap_tolerance) {
        trace.status = RunStatus::Converged;
        return trace;
      }
      best_metric = std::min(best_metric, metric);
      if (best_metric > 0.0 && metric > kDivergenceFactor * best_metric) {
        trace.status = RunStatus::Diverged;
        return trace;
      }
    }
  }
  trace.status = RunStatus::MaxIters;
  return trace;
}

}  // namespace

ConvergenceTrace run_algorithm1(const GameInstance& game, const WeightMatrix& W,
                                const SolverConfig& config, const Eigen::MatrixXd& X0,
                                const Eigen::VectorXd* x_star, const StepObserver& observer) {
  return run_impl(game, W, config, X0, x_star, observer);
}

ConvergenceTrace run_diminishing_baseline(const GameInstance& game, const WeightMatrix& W,
                                          double alpha0, int max_iters,
                                          const Eigen::MatrixXd& X0, const Eigen::VectorXd* x_star,
                                          const StepObserver& observer, double exponent) {
  SolverConfig config;
  config.alpha = alpha0;
  config.beta = 1.0;
  config.max_iters = max_iters;
  config.schedule = StepSchedule::Diminishing;
  config.diminishing_exponent = exponent;
  return run_impl(game, W, config, X0, x_star, observer);
}

TheoryConstants theory_constants(double alpha, double beta, double mu, double L, double sigma) {
  if (!(mu > 0.0) || !(L > 0.0)) throw ConfigError("theory_constants: need mu > 0 and L > 0");
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("theory_constants: sigma must be in [0, 1)");
  if (!(alpha > 0.0)) throw ConfigError("theory_constants: alpha must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("theory_constants: beta must be in (0, 1]");

  const double Lbar2 = 2.0 * L * L;
  TheoryConstants t;
  t.a = alpha * beta * (mu - 2.0 * alpha * Lbar2);
  t.b = alpha * beta * sigma * sigma * L * L * (1.0 / mu + 2.0 * alpha);
  t.c = 4.0 * beta * beta / (1.0 - sigma * sigma);
  t.d = 2.0 * sigma * sigma / (1.0 + sigma * sigma);
  t.M << 1.0 - t.a, t.b, t.c * (2.0 - t.a), t.b * t.c + t.d;

  // Closed form for the characteristic roots; the discriminant is
  // positive throughout the certified region.
  const double B = t.a - t.b * t.c - t.d - 1.0;
  const double disc = B * B - 4.0 * ((1.0 - t.a) * t.d - t.b * t.c);
  if (disc >= 0.0) {
    const double r1 = 0.5 * (-B + std::sqrt(disc));
    const double r2 = 0.5 * (-B - std::sqrt(disc));
    t.rho = std::max(std::abs(r1), std::abs(r2));
  } else {
    t.rho = std::sqrt(t.M.determinant());  // complex pair: |lambda|^2 = det
  }
  const double consensus_drag =
      4.0 * (sigma * L * beta) * (sigma * L * beta) / (1.0 - sigma * sigma) *
      (1.0 / mu + 2.0 * alpha);
  t.rate_bound = 1.0 - 0.5 * alpha * beta * (mu - 2.0 * alpha * Lbar2 - consensus_drag);
  t.certificate_applies = (t.a > 0.0) && (t.rho < 1.0);
  return t;
}

double beta_max_bound(double mu, double L, double sigma) {
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("beta_max_bound: sigma must be in [0, 1)");
  if (!(mu > 0.0) || !(L > 0.0)) throw ConfigError("beta_max_bound: need mu > 0 and L > 0");
  if (sigma == 0.0) return 1.0;
  const double s2 = sigma * sigma;
  return std::min(1.0, mu * (1.0 - s2) / (2.0 * sigma * L * std::sqrt(7.0 + 11.0 * s2)));
}

double alpha_max_bound(double mu, double L, double sigma, double beta) {
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("alpha_max_bound: sigma must be in [0, 1)");
  if (!(mu > 0.0) || !(L > 0.0)) throw ConfigError("alpha_max_bound: need mu > 0 and L > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("alpha_max_bound: beta must be in (0, 1]");
  const double s2 = sigma * sigma;
  const double Lbar2 = 2.0 * L * L;
  const double w = 1.0 - s2;
  const double k = (7.0 + 11.0 * s2) * (sigma * L * beta) * (sigma * L * beta);
  return (mu * mu * w * w - 4.0 * k) / (2.0 * mu * Lbar2 * w * w + 8.0 * mu * k);
}

}  // namespace nag
