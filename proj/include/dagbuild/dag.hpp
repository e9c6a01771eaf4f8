#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dagbuild/errors.hpp"

namespace dagbuild {

// Weighted adjacency matrix with the convention A(i, j) != 0  <=>  arc j -> i,
// i.e. row i holds the weights of node i's parents and column j the weights
// of node j's children.
struct WeightedDag {
  int n = 0;
  Eigen::MatrixXd weights;

  // Permutation used by the random generator (debugging aid); empty for
  // graphs that were not sampled. Ground truth always lives in unpermuted
  // id space.
  std::vector<int> generation_order;

  WeightedDag() = default;
  explicit WeightedDag(int n_nodes)
      : n(n_nodes), weights(Eigen::MatrixXd::Zero(n_nodes, n_nodes)) {}
  WeightedDag(int n_nodes, Eigen::MatrixXd w)
      : n(n_nodes), weights(std::move(w)) {}

  bool has_edge(int child, int parent) const {
    return weights(child, parent) != 0.0;
  }

  int edge_count() const {
    int count = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (weights(i, j) != 0.0) ++count;
    return count;
  }
};

// Permutation of {0..n-1} in which every parent precedes its children.
using TopologicalOrder = std::vector<int>;

struct UndirectedGraph {
  int n = 0;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency;

  UndirectedGraph() = default;
  explicit UndirectedGraph(int n_nodes)
      : n(n_nodes),
        adjacency(Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
            n_nodes, n_nodes, false)) {}

  bool has_edge(int i, int j) const { return adjacency(i, j); }
  int edge_count() const;
};

// Throws SelfLoopError or CycleError when the invariants fail.
void validate(const WeightedDag& dag);

// Kahn's algorithm; among ready nodes the lowest index goes first, so the
// result is the lexicographically smallest linear extension.
TopologicalOrder topological_order(const WeightedDag& dag);

bool is_valid_topological_order(const WeightedDag& dag,
                                const TopologicalOrder& order);

std::vector<int> children(const WeightedDag& dag, int i);
std::vector<int> parents(const WeightedDag& dag, int i);
std::vector<int> leaves(const WeightedDag& dag);

// Undirected skeleton plus an edge between every pair of co-parents.
UndirectedGraph moralize(const WeightedDag& dag);

// Erdos-Renyi DAG: a random node permutation orders the nodes, every pair
// below the diagonal in permuted order carries an edge independently with
// probability d/(n-1), and edge weights are uniform on
// (-weight_hi, -weight_lo) u (weight_lo, weight_hi) with equal mass on the
// two sign intervals. Under this parameterization each node's expected
// total degree (in + out) is d.
WeightedDag sample_er_dag(int n, double expected_degree, double weight_lo,
                          double weight_hi, std::uint64_t seed);

// Chain 0 -> 1 -> ... -> n-1 with every edge weight equal to k.
WeightedDag chain_dag(int n, double k);

}  // namespace dagbuild
