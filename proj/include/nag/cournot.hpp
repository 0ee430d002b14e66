#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "nag/game.hpp"

namespace nag {

// Nash-Cournot market over L locations: firm i picks productions g_{il}
// and sales s_{il}. Actions are laid out [g_1..g_L, s_1..s_L], p = 2L.
struct CournotParams {
  int n = 0;
  int L = 0;
  Eigen::MatrixXd a;    // linear production cost, n x L
  Eigen::MatrixXd b;    // quadratic production cost, n x L
  Eigen::VectorXd d;    // price intercept per location
  Eigen::MatrixXd cap;  // production capacity, n x L
  std::uint64_t seed = 0;
};

// Draws a ~ U(2,12), b ~ U(2,3), d ~ U(90,100) with the splitmix64 stream
// (a row-major, then b, then d), constant capacity.
CournotParams sample_cournot_params(int n, int L, std::uint64_t seed, double cap);

GameInstance build_cournot(const CournotParams& params);
GameInstance build_cournot(int n, int L, std::uint64_t seed, double cap);

}  // namespace nag
