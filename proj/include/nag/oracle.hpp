#pragma once

#include <Eigen/Core>

#include "nag/feasible_set.hpp"
#include "nag/game.hpp"

namespace nag {

// High-precision reference Nash equilibrium obtained from the centralized
// fixed-point iteration; the strongly monotone setting makes it unique.
struct ReferenceSolution {
  Eigen::VectorXd x_star;
  double residual = 0.0;   // natural residual achieved
  long iterations = 0;
};

// Iterates x <- Pi_X[x - alpha phi(x)] with alpha = 0.9 mu / (2 Lbar^2)
// until the natural residual drops below tol.
ReferenceSolution solve_reference(const GameInstance& game, double tol,
                                  long max_iters = 1'000'000);

// ||x - Pi_X[x - alpha phi(x)]||.
double vi_residual(const GameInstance& game, const Eigen::VectorXd& x_stacked, double alpha);

// Independent projection oracle. Dimension <= 3: enumerates all
// clamp patterns of the KKT system and returns the feasible candidate
// closest to y. Higher dimensions: Dykstra alternating-projection
// cross-check at tolerance ~1e-7.
Eigen::VectorXd brute_force_project(const FeasibleSet& set, const Eigen::VectorXd& y);

}  // namespace nag
