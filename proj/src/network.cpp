#include "nag/network.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <queue>
#include <vector>

#include "nag/errors.hpp"

namespace nag {

TopologyKind parse_topology(std::string_view name) {
  if (name == "linear") return TopologyKind::Linear;
  if (name == "log") return TopologyKind::Log;
  if (name == "complete") return TopologyKind::Complete;
  throw ConfigError("unknown topology kind: " + std::string(name));
}

std::string_view topology_name(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Linear: return "linear";
    case TopologyKind::Log: return "log";
    case TopologyKind::Complete: return "complete";
  }
  throw ConfigError("invalid topology kind");
}

void EdgeSet::add(int i, int j) {
  if (i == j) return;  // degenerate pairs are dropped
  if (i < 1 || j < 1 || i > n || j > n) throw ConfigError("EdgeSet: node out of range");
  edges.emplace(std::min(i, j), std::max(i, j));
}

int EdgeSet::degree(int i) const {
  int d = 0;
  for (const auto& [u, v] : edges)
    if (u == i || v == i) ++d;
  return d;
}

EdgeSet build_topology(TopologyKind kind, int n) {
  if (n < 2) throw ConfigError("build_topology: need n >= 2");
  EdgeSet es;
  es.n = n;
  switch (kind) {
    case TopologyKind::Complete:
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) es.add(i, j);
      break;
    case TopologyKind::Linear:
      for (int i = 1; i <= n; ++i)
        for (int j = 0; 11.0 * j < double(n); ++j) es.add(i, (i + 11 * j) % n + 1);
      break;
    case TopologyKind::Log:
      for (int i = 1; i <= n; ++i)
        for (int j = 0; double(j) < std::log2(double(n)); ++j)
          es.add(i, (i + (1 << j)) % n + 1);
      break;
  }
  return es;
}

bool is_connected(const EdgeSet& edges) {
  if (edges.n <= 0) return false;
  std::vector<std::vector<int>> adj(edges.n + 1);
  for (const auto& [u, v] : edges.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(edges.n + 1, 0);
  std::queue<int> q;
  q.push(1);
  seen[1] = 1;
  int count = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    ++count;
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
    }
  }
  return count == edges.n;
}

double consensus_sigma(const Eigen::MatrixXd& W) {
  const Eigen::Index n = W.rows();
  if (n == 0 || W.cols() != n) throw ConfigError("consensus_sigma: square matrix required");
  const double tol = 1e-10;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(W.row(i).sum() - 1.0) > tol || std::abs(W.col(i).sum() - 1.0) > tol)
      throw ConfigError("consensus_sigma: matrix is not doubly stochastic");
  }
  const Eigen::MatrixXd D = W - Eigen::MatrixXd::Constant(n, n, 1.0 / double(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D.transpose() * D);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

WeightMatrix WeightMatrix::from_edges(const EdgeSet& edges) {
  if (edges.edges.empty()) throw ConfigError("WeightMatrix: empty graph");
  const int n = edges.n;
  std::vector<int> deg(n + 1, 0);
  for (const auto& [u, v] : edges.edges) {
    ++deg[u];
    ++deg[v];
  }
  const int max_deg = *std::max_element(deg.begin() + 1, deg.end());
  const double delta = 0.5 / double(max_deg);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : edges.edges) {
    W(u - 1, v - 1) = delta;
    W(v - 1, u - 1) = delta;
  }
  for (int i = 1; i <= n; ++i) W(i - 1, i - 1) = 1.0 - delta * deg[i];
  const double sigma = consensus_sigma(W);
  return WeightMatrix(std::move(W), sigma);
}

WeightMatrix WeightMatrix::from_matrix(Eigen::MatrixXd W) {
  const double sigma = consensus_sigma(W);
  return WeightMatrix(std::move(W), sigma);
}

}  // namespace nag
