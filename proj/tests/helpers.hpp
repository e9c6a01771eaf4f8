#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dagbuild/dag.hpp"
#include "dagbuild/rng.hpp"

namespace testutil {

// Three nodes, arcs 0 -> 2 (weight 0.8) and 1 -> 2 (weight -1.5); the small
// collider used throughout the worked examples.
inline dagbuild::WeightedDag collider3() {
  dagbuild::WeightedDag dag(3);
  dag.weights(2, 0) = 0.8;
  dag.weights(2, 1) = -1.5;
  return dag;
}

// random DAG in unpermuted id space: random permutation defines the order,
// every admissible arc appears with probability p, weights uniform +-(lo, hi]
inline dagbuild::WeightedDag random_dag(int n, double p, double lo, double hi,
                                        std::uint64_t seed) {
  dagbuild::Rng rng(seed);
  const std::vector<int> perm = rng.permutation(n);
  dagbuild::WeightedDag dag(n);
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (rng.uniform01() >= p) continue;
      double w = rng.uniform(lo, hi);
      if (rng.uniform01() < 0.5) w = -w;
      dag.weights(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(j)]) = w;
    }
  }
  return dag;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
