#include "nag/oracle.hpp"

#include <cmath>
#include <limits>

#include "nag/errors.hpp"
#include "nag/solver.hpp"

namespace nag {

ReferenceSolution solve_reference(const GameInstance& game, double tol, long max_iters) {
  if (!(tol > 0.0)) throw ConfigError("solve_reference: tol must be positive");
  const MonotonicityConstants ml = game.is_affine()
                                       ? game.monotonicity_constants()
                                       : game.sample_monotonicity_constants(2000, 12345);
  if (!(ml.mu > 0.0))
    throw ConfigError("solve_reference: game is not strongly monotone (mu <= 0)");
  const double Lbar2 = 2.0 * ml.lipschitz * ml.lipschitz;
  const double alpha = 0.9 * ml.mu / (2.0 * Lbar2);

  Eigen::VectorXd x = game.project_stacked(
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(game.num_players()) * game.action_dim()));
  double best = std::numeric_limits<double>::infinity();
  for (long k = 0; k < max_iters; ++k) {
    const Eigen::VectorXd next = step_centralized(x, game, alpha);
    const double res = (x - next).norm();
    best = std::min(best, res);
    if (res <= tol) return ReferenceSolution{x, res, k};
    x = next;
  }
  throw NumericError("solve_reference: iteration cap reached, best residual " +
                     std::to_string(best));
}

double vi_residual(const GameInstance& game, const Eigen::VectorXd& x_stacked, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("vi_residual: alpha must be positive");
  return (x_stacked - step_centralized(x_stacked, game, alpha)).norm();
}

namespace {

// Dykstra's alternating projections between the box and the hyperplane;
// converges to the exact projection onto the intersection.
Eigen::VectorXd dykstra_project(const FeasibleSet& set, const Eigen::VectorXd& y) {
  const Eigen::VectorXd& a = set.hyperplane()->normal;
  const double b = set.hyperplane()->offset;
  const double a2 = a.squaredNorm();
  Eigen::VectorXd x = y;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(y.size());  // box correction
  Eigen::VectorXd q = Eigen::VectorXd::Zero(y.size());  // hyperplane correction
  const double tol = 1e-9 * (1.0 + y.norm());
  for (int it = 0; it < 1000000; ++it) {
    const Eigen::VectorXd xb = (x + p).cwiseMax(set.lower()).cwiseMin(set.upper());
    p = x + p - xb;
    const Eigen::VectorXd xh = xb + q - a * ((a.dot(xb + q) - b) / a2);
    q = xb + q - xh;
    if ((xh - x).norm() < tol && std::abs(a.dot(xh) - b) < tol) return xh;
    x = xh;
  }
  throw NumericError("brute_force_project: alternating projections did not converge");
}

}  // namespace

Eigen::VectorXd brute_force_project(const FeasibleSet& set, const Eigen::VectorXd& y) {
  if (y.size() != set.dim()) throw ConfigError("brute_force_project: dimension mismatch");
  if (!set.hyperplane()) return y.cwiseMax(set.lower()).cwiseMin(set.upper());

  const int dim = set.dim();
  if (dim > 3) return dykstra_project(set, y);

  const Eigen::VectorXd& a = set.hyperplane()->normal;
  const double b = set.hyperplane()->offset;
  const double plane_tol = 1e-9 * (1.0 + std::abs(b));
  const double box_tol = 1e-12;

  Eigen::VectorXd best;
  double best_dist = std::numeric_limits<double>::infinity();

  // Pattern digit per coordinate: 0 = free, 1 = at lower, 2 = at upper.
  int total = 1;
  for (int j = 0; j < dim; ++j) total *= 3;
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    double free_norm2 = 0.0, resid = -b;
    bool valid = true;
    int c = code;
    std::vector<int> free_coords;
    for (int j = 0; j < dim; ++j, c /= 3) {
      const int digit = c % 3;
      if (digit == 1) {
        if (std::isinf(set.lower()[j])) { valid = false; break; }
        x[j] = set.lower()[j];
        resid += a[j] * x[j];
      } else if (digit == 2) {
        if (std::isinf(set.upper()[j])) { valid = false; break; }
        x[j] = set.upper()[j];
        resid += a[j] * x[j];
      } else {
        free_coords.push_back(j);
        free_norm2 += a[j] * a[j];
        resid += a[j] * y[j];
      }
    }
    if (!valid) continue;

    if (free_norm2 > 0.0) {
      const double lambda = resid / free_norm2;
      for (int j : free_coords) x[j] = y[j] - lambda * a[j];
    } else {
      for (int j : free_coords) x[j] = y[j];
      if (std::abs(resid) > plane_tol) continue;
    }

    bool feasible = std::abs(a.dot(x) - b) <= plane_tol;
    for (int j = 0; feasible && j < dim; ++j)
      feasible = x[j] >= set.lower()[j] - box_tol && x[j] <= set.upper()[j] + box_tol;
    if (!feasible) continue;

    const double dist = (x - y).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  if (!best.size()) throw NumericError("brute_force_project: no feasible KKT candidate");
  return best;
}

}  // namespace nag
