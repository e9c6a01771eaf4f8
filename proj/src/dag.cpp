#include "dagbuild/dag.hpp"

#include <algorithm>
#include <queue>

#include "dagbuild/rng.hpp"

namespace dagbuild {

namespace {

void check_node_index(const WeightedDag& dag, int i) {
  if (i < 0 || i >= dag.n) {
    throw IndexError("node index " + std::to_string(i) + " out of range [0, " +
                     std::to_string(dag.n) + ")");
  }
}

// Kahn's algorithm with a min-heap of ready nodes. Returns the placed prefix;
// a short result means the leftover nodes sit on or downstream of a cycle.
TopologicalOrder kahn_order(const WeightedDag& dag) {
  const int n = dag.n;
  std::vector<int> in_degree(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dag.weights(i, j) != 0.0) ++in_degree[static_cast<std::size_t>(i)];

  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < n; ++i)
    if (in_degree[static_cast<std::size_t>(i)] == 0) ready.push(i);

  TopologicalOrder order;
  order.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    const int j = ready.top();
    ready.pop();
    order.push_back(j);
    for (int i = 0; i < n; ++i) {
      if (dag.weights(i, j) != 0.0 &&
          --in_degree[static_cast<std::size_t>(i)] == 0) {
        ready.push(i);
      }
    }
  }
  return order;
}

}  // namespace

int UndirectedGraph::edge_count() const {
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacency(i, j)) ++count;
  return count;
}

void validate(const WeightedDag& dag) {
  if (dag.weights.rows() != dag.n || dag.weights.cols() != dag.n) {
    throw DimensionMismatchError("weights matrix is not n x n");
  }
  for (int i = 0; i < dag.n; ++i) {
    if (dag.weights(i, i) != 0.0) throw SelfLoopError(i);
  }
  const TopologicalOrder order = kahn_order(dag);
  if (static_cast<int>(order.size()) != dag.n) {
    std::vector<char> placed(static_cast<std::size_t>(dag.n), 0);
    for (int v : order) placed[static_cast<std::size_t>(v)] = 1;
    std::vector<int> witness;
    for (int v = 0; v < dag.n; ++v)
      if (!placed[static_cast<std::size_t>(v)]) witness.push_back(v);
    throw CycleError(std::move(witness));
  }
}

TopologicalOrder topological_order(const WeightedDag& dag) {
  TopologicalOrder order = kahn_order(dag);
  if (static_cast<int>(order.size()) != dag.n) {
    std::vector<char> placed(static_cast<std::size_t>(dag.n), 0);
    for (int v : order) placed[static_cast<std::size_t>(v)] = 1;
    std::vector<int> witness;
    for (int v = 0; v < dag.n; ++v)
      if (!placed[static_cast<std::size_t>(v)]) witness.push_back(v);
    throw CycleError(std::move(witness));
  }
  return order;
}

bool is_valid_topological_order(const WeightedDag& dag,
                                const TopologicalOrder& order) {
  if (static_cast<int>(order.size()) != dag.n) return false;
  std::vector<int> position(static_cast<std::size_t>(dag.n), -1);
  for (int pos = 0; pos < dag.n; ++pos) {
    const int v = order[static_cast<std::size_t>(pos)];
    if (v < 0 || v >= dag.n || position[static_cast<std::size_t>(v)] != -1)
      return false;
    position[static_cast<std::size_t>(v)] = pos;
  }
  for (int i = 0; i < dag.n; ++i)
    for (int j = 0; j < dag.n; ++j)
      if (dag.weights(i, j) != 0.0 &&
          position[static_cast<std::size_t>(j)] >=
              position[static_cast<std::size_t>(i)])
        return false;
  return true;
}

std::vector<int> children(const WeightedDag& dag, int i) {
  check_node_index(dag, i);
  std::vector<int> out;
  for (int k = 0; k < dag.n; ++k)
    if (dag.weights(k, i) != 0.0) out.push_back(k);
  return out;
}

std::vector<int> parents(const WeightedDag& dag, int i) {
  check_node_index(dag, i);
  std::vector<int> out;
  for (int j = 0; j < dag.n; ++j)
    if (dag.weights(i, j) != 0.0) out.push_back(j);
  return out;
}

std::vector<int> leaves(const WeightedDag& dag) {
  std::vector<int> out;
  for (int i = 0; i < dag.n; ++i) {
    bool has_child = false;
    for (int k = 0; k < dag.n; ++k) {
      if (dag.weights(k, i) != 0.0) {
        has_child = true;
        break;
      }
    }
    if (!has_child) out.push_back(i);
  }
  return out;
}

UndirectedGraph moralize(const WeightedDag& dag) {
  UndirectedGraph g(dag.n);
  for (int i = 0; i < dag.n; ++i) {
    for (int j = 0; j < dag.n; ++j) {
      if (i != j && dag.weights(i, j) != 0.0) {
        g.adjacency(i, j) = true;
        g.adjacency(j, i) = true;
      }
    }
  }
  // marry co-parents
  for (int k = 0; k < dag.n; ++k) {
    const std::vector<int> pa = parents(dag, k);
    for (std::size_t a = 0; a < pa.size(); ++a) {
      for (std::size_t b = a + 1; b < pa.size(); ++b) {
        g.adjacency(pa[a], pa[b]) = true;
        g.adjacency(pa[b], pa[a]) = true;
      }
    }
  }
  return g;
}

WeightedDag sample_er_dag(int n, double expected_degree, double weight_lo,
                          double weight_hi, std::uint64_t seed) {
  if (n < 2) throw InvalidParameterError("sample_er_dag requires n >= 2");
  if (!(expected_degree > 0.0) || expected_degree > static_cast<double>(n - 1))
    throw InvalidParameterError("expected degree must lie in (0, n-1]");
  if (!(weight_lo > 0.0) || !(weight_lo < weight_hi))
    throw InvalidParameterError("need 0 < weight_lo < weight_hi");

  Rng rng(seed);
  const double p = expected_degree / static_cast<double>(n - 1);
  WeightedDag dag(n);
  dag.generation_order = rng.permutation(n);
  const std::vector<int>& perm = dag.generation_order;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (rng.uniform01() >= p) continue;
      double w = rng.uniform(weight_lo, weight_hi);  // magnitude in (lo, hi]
      if (rng.uniform01() < 0.5) w = -w;
      // pair (i, j) below the diagonal in permuted order: arc perm[j] -> perm[i]
      dag.weights(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(j)]) = w;
    }
  }
  return dag;
}

WeightedDag chain_dag(int n, double k) {
  if (n < 2) throw InvalidParameterError("chain_dag requires n >= 2");
  WeightedDag dag(n);
  for (int i = 0; i + 1 < n; ++i) dag.weights(i + 1, i) = k;
  return dag;
}

}  // namespace dagbuild
