#include "nag/feasible_set.hpp"

#include <cmath>
#include <limits>

#include "nag/errors.hpp"

namespace nag {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Range of a . x over the box, used for the nonemptiness check.
std::pair<double, double> hyperplane_range(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                           const Eigen::VectorXd& a) {
  double mn = 0.0, mx = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    if (a[j] > 0) {
      mn += a[j] * lo[j];
      mx += a[j] * hi[j];
    } else if (a[j] < 0) {
      mn += a[j] * hi[j];
      mx += a[j] * lo[j];
    }
  }
  return {mn, mx};
}
}  // namespace

FeasibleSet::FeasibleSet(Eigen::VectorXd lower, Eigen::VectorXd upper, std::optional<Hyperplane> h)
    : lower_(std::move(lower)), upper_(std::move(upper)), hyperplane_(std::move(h)) {
  if (lower_.size() != upper_.size()) throw ConfigError("FeasibleSet: bound size mismatch");
  if (lower_.size() == 0) throw ConfigError("FeasibleSet: empty dimension");
  for (int j = 0; j < lower_.size(); ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j])
      throw ConfigError("FeasibleSet: lower > upper at coordinate " + std::to_string(j));
  }
  if (hyperplane_) {
    const auto& hp = *hyperplane_;
    if (hp.normal.size() != lower_.size())
      throw ConfigError("FeasibleSet: hyperplane dimension mismatch");
    if (hp.normal.norm() == 0.0) throw ConfigError("FeasibleSet: zero hyperplane normal");
    const auto [mn, mx] = hyperplane_range(lower_, upper_, hp.normal);
    const double tol = 1e-12 * (1.0 + std::abs(hp.offset));
    if (hp.offset < mn - tol || hp.offset > mx + tol)
      throw ConfigError("FeasibleSet: box and hyperplane do not intersect");
  }
}

FeasibleSet FeasibleSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  return FeasibleSet(std::move(lower), std::move(upper), std::nullopt);
}

FeasibleSet FeasibleSet::box_hyperplane(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                        Eigen::VectorXd normal, double offset) {
  return FeasibleSet(std::move(lower), std::move(upper),
                     Hyperplane{std::move(normal), offset});
}

bool FeasibleSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim()) return false;
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] < lower_[j] - tol || x[j] > upper_[j] + tol) return false;
  }
  if (hyperplane_) {
    const double r = hyperplane_->normal.dot(x) - hyperplane_->offset;
    if (std::abs(r) > tol * (1.0 + std::abs(hyperplane_->offset))) return false;
  }
  return true;
}

bool FeasibleSet::is_bounded() const {
  // A recession direction d has d_j >= 0 where only the lower bound is
  // finite, d_j <= 0 where only the upper bound is finite, d_j = 0 where
  // both are finite, and (with a hyperplane) a . d = 0. With a single
  // hyperplane the existence question reduces to sign logic on a.
  bool any_open = false;
  bool can_positive = false, can_negative = false;  // achievable signs of a . d per coordinate
  for (int j = 0; j < dim(); ++j) {
    const bool open_up = std::isinf(upper_[j]);
    const bool open_down = std::isinf(lower_[j]);
    if (!open_up && !open_down) continue;
    any_open = true;
    if (!hyperplane_) return false;
    const double aj = hyperplane_->normal[j];
    if (aj == 0.0) return false;  // d = +-e_j stays on the hyperplane
    if (open_up) ((aj > 0) ? can_positive : can_negative) = true;
    if (open_down) ((aj > 0) ? can_negative : can_positive) = true;
  }
  if (!any_open) return true;
  // A nonzero direction with a . d = 0 needs balancing contributions.
  return !(can_positive && can_negative);
}

void FeasibleSet::require_bounded() const {
  if (!is_bounded()) throw ConfigError("FeasibleSet: unbounded set not admissible for solver use");
}

Eigen::VectorXd FeasibleSet::clamp(const Eigen::VectorXd& y) const {
  return y.cwiseMax(lower_).cwiseMin(upper_);
}

Eigen::VectorXd FeasibleSet::project(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) throw ConfigError("project: dimension mismatch");
  if (!y.allFinite()) throw ConfigError("project: non-finite input");
  if (!hyperplane_) return clamp(y);

  const Eigen::VectorXd& a = hyperplane_->normal;
  const double b = hyperplane_->offset;
  // Roundoff in the residual dot product grows with the coordinate scale,
  // so the tolerance must too.
  const double scale = 1.0 + std::abs(b) + a.cwiseAbs().dot(clamp(y).cwiseAbs());
  const double tol = 1e-12 * scale;
  auto residual = [&](double lambda) { return a.dot(clamp(y - lambda * a)) - b; };

  // residual is nonincreasing in lambda. Bracket the root by doubling.
  double r0 = residual(0.0);
  if (std::abs(r0) <= tol) return clamp(y);
  double lo = 0.0, hi = 0.0;
  double width = (1.0 + y.norm()) / a.squaredNorm();
  if (r0 > 0) {
    hi = width;
    int expand = 0;
    while (residual(hi) > 0) {
      lo = hi;
      hi *= 2.0;
      if (++expand > 200) throw NumericError("project: bracket expansion failed");
    }
  } else {
    lo = -width;
    int expand = 0;
    while (residual(lo) < 0) {
      hi = lo;
      lo *= 2.0;
      if (++expand > 200) throw NumericError("project: bracket expansion failed");
    }
  }

  // Refine to floating-point resolution: the residual tolerance alone
  // can leave the projection measurably suboptimal in distance.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (residual(mid) > 0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  if (std::abs(residual(lambda)) > tol)
    throw NumericError("project: dual bisection did not converge (malformed set?)");
  return clamp(y - lambda * a);
}

}  // namespace nag
