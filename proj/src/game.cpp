#include "nag/game.hpp"

#include <Eigen/Dense>

#include "nag/errors.hpp"
#include "nag/rng.hpp"

namespace nag {

GameInstance::GameInstance(std::vector<Player> players,
                           std::optional<std::vector<AffineGradient>> affine)
    : players_(std::move(players)), affine_(std::move(affine)) {
  if (players_.empty()) throw ConfigError("GameInstance: needs at least one player");
  n_ = static_cast<int>(players_.size());
  p_ = players_.front().set.dim();
  for (const auto& pl : players_) {
    if (pl.set.dim() != p_) throw ConfigError("GameInstance: players must share action dimension");
    if (!pl.cost || !pl.gradient) throw ConfigError("GameInstance: missing evaluator");
  }
  if (affine_) {
    if (static_cast<int>(affine_->size()) != n_)
      throw ConfigError("GameInstance: affine data size mismatch");
    for (const auto& af : *affine_) {
      if (af.own.rows() != p_ || af.own.cols() != p_ || af.agg.rows() != p_ ||
          af.agg.cols() != p_ || af.constant.size() != p_)
        throw ConfigError("GameInstance: affine block dimension mismatch");
    }
  }
}

void GameInstance::check_player_dims(int i, const Eigen::VectorXd& x_i,
                                     const Eigen::VectorXd& z) const {
  if (i < 0 || i >= n_) throw ConfigError("GameInstance: player index out of range");
  if (x_i.size() != p_ || z.size() != p_)
    throw ConfigError("GameInstance: action/aggregate dimension mismatch");
}

double GameInstance::eval_cost(int i, const Eigen::VectorXd& x_i, const Eigen::VectorXd& z) const {
  check_player_dims(i, x_i, z);
  return players_[i].cost(x_i, z);
}

Eigen::VectorXd GameInstance::eval_grad(int i, const Eigen::VectorXd& x_i,
                                        const Eigen::VectorXd& z) const {
  check_player_dims(i, x_i, z);
  return players_[i].gradient(x_i, z);
}

Eigen::VectorXd GameInstance::aggregate(const Eigen::VectorXd& x_stacked) const {
  if (x_stacked.size() != static_cast<Eigen::Index>(n_) * p_)
    throw ConfigError("aggregate: stacked profile has wrong size");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p_);
  for (int i = 0; i < n_; ++i) z += x_stacked.segment(i * p_, p_);
  return z / n_;
}

Eigen::VectorXd GameInstance::eval_phi(const Eigen::VectorXd& x_stacked) const {
  const Eigen::VectorXd z = aggregate(x_stacked);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_) * p_);
  for (int i = 0; i < n_; ++i)
    out.segment(i * p_, p_) = players_[i].gradient(x_stacked.segment(i * p_, p_), z);
  return out;
}

const std::vector<AffineGradient>& GameInstance::affine_gradients() const {
  if (!affine_) throw ConfigError("GameInstance: not an affine game");
  return *affine_;
}

Eigen::MatrixXd GameInstance::phi_matrix() const {
  const auto& af = affine_gradients();
  const Eigen::Index np = static_cast<Eigen::Index>(n_) * p_;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(np, np);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) A.block(i * p_, j * p_, p_, p_) = af[i].agg / n_;
    A.block(i * p_, i * p_, p_, p_) += af[i].own;
  }
  return A;
}

Eigen::VectorXd GameInstance::phi_offset() const {
  const auto& af = affine_gradients();
  Eigen::VectorXd q(static_cast<Eigen::Index>(n_) * p_);
  for (int i = 0; i < n_; ++i) q.segment(i * p_, p_) = af[i].constant;
  return q;
}

MonotonicityConstants GameInstance::monotonicity_constants() const {
  const auto& af = affine_gradients();
  const Eigen::MatrixXd A = phi_matrix();
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  MonotonicityConstants out;
  out.mu = es.eigenvalues().minCoeff();
  for (const auto& blk : af) {
    Eigen::MatrixXd J(p_, 2 * p_);
    J << blk.own, blk.agg;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(J * J.transpose());
    out.lipschitz = std::max(out.lipschitz, std::sqrt(std::max(0.0, gram.eigenvalues().maxCoeff())));
  }
  out.certified = true;
  return out;
}

MonotonicityConstants GameInstance::sample_monotonicity_constants(int budget,
                                                                  std::uint64_t seed) const {
  if (budget <= 0) throw ConfigError("sample_monotonicity_constants: needs a positive budget");
  SplitMix64 rng(seed);
  const Eigen::Index np = static_cast<Eigen::Index>(n_) * p_;
  auto random_profile = [&]() {
    Eigen::VectorXd x(np);
    for (Eigen::Index j = 0; j < np; ++j) x[j] = rng.uniform(-10.0, 10.0);
    return project_stacked(x);
  };
  MonotonicityConstants out;
  out.mu = std::numeric_limits<double>::infinity();
  for (int s = 0; s < budget; ++s) {
    const Eigen::VectorXd x = random_profile();
    const Eigen::VectorXd y = random_profile();
    const double dist2 = (x - y).squaredNorm();
    if (dist2 < 1e-16) continue;
    const double inner = (x - y).dot(eval_phi(x) - eval_phi(y));
    out.mu = std::min(out.mu, inner / dist2);
    const Eigen::VectorXd zx = aggregate(x), zy = aggregate(y);
    for (int i = 0; i < n_; ++i) {
      const Eigen::VectorXd xi = x.segment(i * p_, p_), yi = y.segment(i * p_, p_);
      const double denom2 = (xi - yi).squaredNorm() + (zx - zy).squaredNorm();
      if (denom2 < 1e-16) continue;
      const double ratio =
          (eval_grad(i, xi, zx) - eval_grad(i, yi, zy)).norm() / std::sqrt(denom2);
      out.lipschitz = std::max(out.lipschitz, ratio);
    }
  }
  if (!std::isfinite(out.mu)) throw NumericError("sample_monotonicity_constants: no usable samples");
  out.certified = false;
  return out;
}

Eigen::VectorXd GameInstance::project_stacked(const Eigen::VectorXd& x_stacked) const {
  if (x_stacked.size() != static_cast<Eigen::Index>(n_) * p_)
    throw ConfigError("project_stacked: wrong size");
  Eigen::VectorXd out(x_stacked.size());
  for (int i = 0; i < n_; ++i)
    out.segment(i * p_, p_) = players_[i].set.project(x_stacked.segment(i * p_, p_));
  return out;
}

}  // namespace nag
