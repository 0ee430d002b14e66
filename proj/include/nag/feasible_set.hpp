#pragma once

#include <Eigen/Core>
#include <optional>

namespace nag {

// Affine constraint {x : normal . x = offset}.
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

// Box constraints (bounds may be +-inf) optionally intersected with a
// single hyperplane. Supports exact Euclidean projection: the box-only
// case is an elementwise clamp; with a hyperplane we solve the
// one-dimensional dual by bisection, since lambda -> a . clamp(y - lambda a)
// is piecewise-linear and nonincreasing.
class FeasibleSet {
 public:
  static FeasibleSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static FeasibleSet box_hyperplane(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                    Eigen::VectorXd normal, double offset);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const std::optional<Hyperplane>& hyperplane() const { return hyperplane_; }

  bool contains(const Eigen::VectorXd& x, double tol = 1e-10) const;

  // True when no nonzero recession direction exists. Exact for the
  // box-and-single-hyperplane class handled here (compactness check).
  bool is_bounded() const;
  void require_bounded() const;

  Eigen::VectorXd project(const Eigen::VectorXd& y) const;

  // Any feasible point (projection of zero).
  Eigen::VectorXd some_point() const { return project(Eigen::VectorXd::Zero(dim())); }

 private:
  FeasibleSet(Eigen::VectorXd lower, Eigen::VectorXd upper, std::optional<Hyperplane> h);
  Eigen::VectorXd clamp(const Eigen::VectorXd& y) const;

  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::optional<Hyperplane> hyperplane_;
};

}  // namespace nag
