#include "nag/cournot.hpp"

#include <limits>

#include "nag/errors.hpp"
#include "nag/rng.hpp"

namespace nag {

CournotParams sample_cournot_params(int n, int L, std::uint64_t seed, double cap) {
  if (n < 2 || L < 1) throw ConfigError("cournot: need n >= 2 and L >= 1");
  if (cap <= 0) throw ConfigError("cournot: capacity must be positive");
  CournotParams params;
  params.n = n;
  params.L = L;
  params.seed = seed;
  params.a.resize(n, L);
  params.b.resize(n, L);
  params.d.resize(L);
  params.cap = Eigen::MatrixXd::Constant(n, L, cap);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < L; ++l) params.a(i, l) = rng.uniform(2.0, 12.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < L; ++l) params.b(i, l) = rng.uniform(2.0, 3.0);
  for (int l = 0; l < L; ++l) params.d(l) = rng.uniform(90.0, 100.0);
  return params;
}

GameInstance build_cournot(const CournotParams& params) {
  const int n = params.n, L = params.L;
  if (n < 2 || L < 1) throw ConfigError("cournot: need n >= 2 and L >= 1");
  if (params.a.rows() != n || params.a.cols() != L || params.b.rows() != n ||
      params.b.cols() != L || params.d.size() != L || params.cap.rows() != n ||
      params.cap.cols() != L)
    throw ConfigError("cournot: parameter size mismatch");
  if ((params.b.array() <= 0.0).any()) throw ConfigError("cournot: b must be positive");
  if ((params.d.array() <= 0.0).any()) throw ConfigError("cournot: d must be positive");
  if ((params.cap.array() <= 0.0).any()) throw ConfigError("cournot: cap must be positive");

  const int p = 2 * L;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<Player> players;
  std::vector<AffineGradient> affine;
  players.reserve(n);
  affine.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd ai = params.a.row(i).transpose();
    const Eigen::VectorXd bi = params.b.row(i).transpose();
    const Eigen::VectorXd d = params.d;

    // Total sales at location l is reconstructed from the aggregate as n * z_{s,l}.
    auto cost = [n, L, ai, bi, d](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
      const auto g = x.head(L);
      const auto s = x.tail(L);
      const Eigen::VectorXd price = d - double(n) * z.tail(L);
      return (ai.array() * g.array() + bi.array() * g.array().square() -
              s.array() * price.array())
          .sum();
    };
    auto gradient = [n, L, ai, bi, d](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
      Eigen::VectorXd out(2 * L);
      out.head(L) = ai + 2.0 * bi.cwiseProduct(x.head(L));
      out.tail(L) = -d + double(n) * z.tail(L) + x.tail(L);
      return out;
    };

    // {0 <= g <= cap, 0 <= s, sum g = sum s}
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(p, inf);
    upper.head(L) = params.cap.row(i).transpose();
    Eigen::VectorXd normal(p);
    normal.head(L).setOnes();
    normal.tail(L).setConstant(-1.0);
    FeasibleSet set = FeasibleSet::box_hyperplane(std::move(lower), std::move(upper),
                                                  std::move(normal), 0.0);
    set.require_bounded();

    AffineGradient af;
    af.own = Eigen::MatrixXd::Zero(p, p);
    af.own.topLeftCorner(L, L) = (2.0 * bi).asDiagonal();
    af.own.bottomRightCorner(L, L).setIdentity();
    af.agg = Eigen::MatrixXd::Zero(p, p);
    af.agg.bottomRightCorner(L, L) = double(n) * Eigen::MatrixXd::Identity(L, L);
    af.constant.resize(p);
    af.constant.head(L) = ai;
    af.constant.tail(L) = -d;

    players.push_back(Player{std::move(cost), std::move(gradient), std::move(set)});
    affine.push_back(std::move(af));
  }
  return GameInstance(std::move(players), std::move(affine));
}

GameInstance build_cournot(int n, int L, std::uint64_t seed, double cap) {
  return build_cournot(sample_cournot_params(n, L, seed, cap));
}

}  // namespace nag
