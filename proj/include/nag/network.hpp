#pragma once

#include <Eigen/Core>
#include <set>
#include <string_view>
#include <utility>

namespace nag {

enum class TopologyKind { Linear, Log, Complete };

TopologyKind parse_topology(std::string_view name);
std::string_view topology_name(TopologyKind kind);

// Undirected edge set over nodes 1..n (no self-loops). Edges are stored
// as ordered pairs (i, j) with i < j.
struct EdgeSet {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  void add(int i, int j);
  int degree(int i) const;
};

// linear:   i talks to mod(i + 11 j, n) + 1 for integer 0 <= j < n / 11
// log:      i talks to mod(i + 2^j, n) + 1 for integer 0 <= j < log2 n
// complete: all pairs
// Generated ordered pairs are symmetrized; self-loops are dropped.
EdgeSet build_topology(TopologyKind kind, int n);

bool is_connected(const EdgeSet& edges);

// Doubly stochastic consensus matrix with the cached second largest
// singular value sigma.
class WeightMatrix {
 public:
  // w_ij = delta on edges, 1 - delta * d(i) on the diagonal, 0 otherwise,
  // with delta = 0.5 / max_i d(i). Symmetric, hence doubly stochastic.
  static WeightMatrix from_edges(const EdgeSet& edges);

  // Validates double stochasticity and caches sigma.
  static WeightMatrix from_matrix(Eigen::MatrixXd W);

  int size() const { return static_cast<int>(W_.rows()); }
  const Eigen::MatrixXd& matrix() const { return W_; }
  double sigma() const { return sigma_; }

 private:
  WeightMatrix(Eigen::MatrixXd W, double sigma) : W_(std::move(W)), sigma_(sigma) {}
  Eigen::MatrixXd W_;
  double sigma_;
};

// Spectral norm of W - (1/n) 1 1^T for a doubly stochastic W.
double consensus_sigma(const Eigen::MatrixXd& W);

}  // namespace nag
