#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "nag/feasible_set.hpp"

namespace nag {

// Closed form of an affine coordinate gradient F_i(x_i, z) = own*x_i + agg*z + constant.
struct AffineGradient {
  Eigen::MatrixXd own;
  Eigen::MatrixXd agg;
  Eigen::VectorXd constant;
};

// One player: local cost f_i(x_i, z), its coordinate gradient
// F_i(x_i, z) = grad_{x_i} f_i + (1/n) grad_z f_i, and a private feasible set.
struct Player {
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> cost;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> gradient;
  FeasibleSet set;
};

// Monotonicity / Lipschitz constants of the pseudo-gradient.
struct MonotonicityConstants {
  double mu = 0.0;
  double lipschitz = 0.0;  // L, per-player coordinate-gradient constant
  bool certified = false;  // true on the exact (affine) path
};

// An aggregative game: each player minimizes f_i(x_i, xbar) over its own
// feasible set, where xbar is the average of all actions. Players share
// the action dimension p; stacked profiles are laid out [x_1; ...; x_n].
class GameInstance {
 public:
  GameInstance(std::vector<Player> players,
               std::optional<std::vector<AffineGradient>> affine = std::nullopt);

  int num_players() const { return n_; }
  int action_dim() const { return p_; }
  const FeasibleSet& feasible_set(int i) const { return players_.at(i).set; }

  double eval_cost(int i, const Eigen::VectorXd& x_i, const Eigen::VectorXd& z) const;
  Eigen::VectorXd eval_grad(int i, const Eigen::VectorXd& x_i, const Eigen::VectorXd& z) const;

  // Average of the n player blocks of a stacked profile.
  Eigen::VectorXd aggregate(const Eigen::VectorXd& x_stacked) const;

  // Pseudo-gradient phi(x) = [F_1(x_1, xbar); ...; F_n(x_n, xbar)].
  Eigen::VectorXd eval_phi(const Eigen::VectorXd& x_stacked) const;

  bool is_affine() const { return affine_.has_value(); }
  const std::vector<AffineGradient>& affine_gradients() const;

  // phi(x) = A x + q for affine games, assembled from the per-player forms.
  Eigen::MatrixXd phi_matrix() const;
  Eigen::VectorXd phi_offset() const;

  // Exact constants for affine games: mu is the smallest eigenvalue of the
  // symmetric part of A, L the largest per-player Jacobian spectral norm.
  MonotonicityConstants monotonicity_constants() const;

  // Sampled lower bound for mu and upper-bound estimate for L; not a
  // certificate. Works for any game.
  MonotonicityConstants sample_monotonicity_constants(int budget, std::uint64_t seed) const;

  // Projects each block of a stacked profile onto its player's set.
  Eigen::VectorXd project_stacked(const Eigen::VectorXd& x_stacked) const;

 private:
  void check_player_dims(int i, const Eigen::VectorXd& x_i, const Eigen::VectorXd& z) const;

  int n_ = 0;
  int p_ = 0;
  std::vector<Player> players_;
  std::optional<std::vector<AffineGradient>> affine_;
};

}  // namespace nag
