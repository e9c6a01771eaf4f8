#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <vector>

#include "dagbuild/estimation.hpp"
#include "dagbuild/sem.hpp"

namespace dagbuild {

// Parameters of the bottom-up recovery loop. The single threshold of the
// pseudocode is split in two because its two roles have different natural
// scales: eps_leaf guards the diagonal scan against pruned residue
// (~ 1/sigma2), eps_edge decides which recovered weights count as edges
// (~ minimum true edge weight).
struct BuildConfig {
  double sigma2 = 1.0;
  // Diagonal floor for live nodes; defaults to 0.5 / sigma2 when unset.
  std::optional<double> eps_leaf;
  double eps_edge = 0.25;
  // Refresh rate in [0, 1]; 0 disables re-estimation.
  double rho = 0.0;
  EstimatorSpec estimator;
  // Record steps whose selected diagonal strays far from 1/sigma2, a sign
  // the candidate was not a clean leaf.
  bool max_parent_check = false;

  double effective_eps_leaf() const {
    return eps_leaf ? *eps_leaf : 0.5 / sigma2;
  }

  void check() const;  // throws ConfigError
};

struct StepDiagnostic {
  int node = -1;
  double diagonal = 0.0;  // Theta_ii at selection time
  int parent_count = 0;   // surviving entries of the recovered row
  bool suspect = false;   // flagged by max_parent_check
};

struct BuildResult {
  Eigen::MatrixXd a_hat;
  std::vector<int> elimination_order;
  int refresh_count = 0;
  // Set when the diagonal scan ran dry before all nodes were pruned; the
  // adjacency accumulator then holds a partial, inspect-only estimate.
  bool incomplete = false;
  std::vector<StepDiagnostic> steps;
  int suspect_leaf_count = 0;
};

// Mutable loop state: working precision matrix, pruned list Q (in order),
// adjacency accumulator, prune counter tau and the refresh checkpoint set.
struct BuildState {
  PrecisionMatrix theta;
  std::vector<int> pruned;
  std::vector<char> in_pruned;
  Eigen::MatrixXd adjacency;
  int tau = 0;
  std::set<int> checkpoints;
  int refresh_count = 0;

  explicit BuildState(PrecisionMatrix theta0);

  // active nodes in ascending order
  std::vector<int> remaining() const;
};

// T = {floor(t * rho * n) : t = 1..n-1} intersected with [1, n-1].
std::set<int> refresh_checkpoints(int n, double rho);

// Among live nodes with Theta_uu >= eps_leaf, the one minimizing Theta_uu
// (lowest index on ties); nullopt when no candidate survives.
std::optional<int> find_leaf(const BuildState& state, double eps_leaf);

// a = -sigma^2 * Theta_i,: with a_i = 0 and |a_j| < eps_edge zeroed.
Eigen::VectorXd recover_row(const BuildState& state, int i, double sigma2,
                            double eps_edge);

// Rank-1 Schur downdate restricted to the recovered parents, then removal of
// node i: for each j with a_j != 0, Theta_j,: -= sigma^-2 a_j a; row and
// column i are zeroed, i joins Q and adjacency row i <- a.
void prune_leaf(BuildState& state, int i, const Eigen::VectorXd& a,
                double sigma2);

// When tau is a checkpoint, re-estimate the precision over the surviving
// nodes and overwrite the active block. Estimator failures propagate; the
// caller records them as a failed run.
void maybe_refresh(BuildState& state, const DataMatrix* x,
                   const EstimatorSpec& spec);

// Full bottom-up loop. The data matrix is needed whenever rho > 0; the
// theta0-only overload therefore requires rho == 0.
BuildResult run_build(const PrecisionMatrix& theta0, const BuildConfig& config);
BuildResult run_build(const DataMatrix& x, const BuildConfig& config);
BuildResult run_build(const PrecisionMatrix& theta0, const DataMatrix& x,
                      const BuildConfig& config);

}  // namespace dagbuild
