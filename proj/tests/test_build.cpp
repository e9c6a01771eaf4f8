#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dagbuild/build.hpp"
#include "dagbuild/metrics.hpp"
#include "helpers.hpp"

using namespace dagbuild;

namespace {

BuildConfig oracle_free_config(double sigma2 = 1.0) {
  BuildConfig config;
  config.sigma2 = sigma2;
  config.eps_edge = 0.25;
  config.rho = 0.0;
  return config;
}

// delete node i and its incident edges, reindexing the survivors
WeightedDag delete_node(const WeightedDag& dag, int node) {
  WeightedDag out(dag.n - 1);
  std::vector<int> map;
  for (int v = 0; v < dag.n; ++v)
    if (v != node) map.push_back(v);
  for (int r = 0; r < out.n; ++r)
    for (int c = 0; c < out.n; ++c)
      out.weights(r, c) = dag.weights(map[static_cast<std::size_t>(r)],
                                      map[static_cast<std::size_t>(c)]);
  return out;
}

}  // namespace

TEST_CASE("refresh_checkpoints matches the published schedules") {
  // rho = 0.005 at n = 200: a refresh after every node
  std::set<int> every;
  for (int t = 1; t <= 199; ++t) every.insert(t);
  CHECK(refresh_checkpoints(200, 0.005) == every);

  // rho = 0.02 at n = 200: every 4 nodes
  std::set<int> by_four;
  for (int t = 4; t <= 196; t += 4) by_four.insert(t);
  CHECK(refresh_checkpoints(200, 0.02) == by_four);

  CHECK(refresh_checkpoints(10, 0.0).empty());
  CHECK(refresh_checkpoints(200, 1.0).empty());  // first multiple is already n
  CHECK_THROWS_AS(refresh_checkpoints(0, 0.5), InvalidParameterError);
  CHECK_THROWS_AS(refresh_checkpoints(10, 1.5), InvalidParameterError);
}

TEST_CASE("find_leaf picks the smallest admissible diagonal") {
  const WeightedDag d1 = testutil::collider3();
  BuildState state(ensemble_precision(d1, NoiseModel(1.0)));
  CHECK(find_leaf(state, 0.5) == 2);  // diag 1.0 < 1.64 < 3.25

  BuildState eye(PrecisionMatrix(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(find_leaf(eye, 0.5) == 0);  // tie-break lowest index

  CHECK(find_leaf(eye, 1.5) == std::nullopt);  // every diagonal below floor
}

TEST_CASE("recover_row negates and thresholds the precision row") {
  const WeightedDag d1 = testutil::collider3();
  BuildState state(ensemble_precision(d1, NoiseModel(1.0)));
  const Eigen::VectorXd a = recover_row(state, 2, 1.0, 0.25);
  Eigen::VectorXd expected(3);
  expected << 0.8, -1.5, 0.0;
  CHECK(testutil::max_abs_diff(a, expected) < 1e-15);

  BuildState eye(PrecisionMatrix(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(recover_row(eye, 1, 1.0, 0.25).isZero(0.0));

  // sub-threshold entries are zeroed
  Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(2, 2);
  theta(0, 1) = theta(1, 0) = -0.1;
  BuildState small{PrecisionMatrix(theta)};
  CHECK(recover_row(small, 0, 1.0, 0.25).isZero(0.0));
  CHECK(recover_row(small, 0, 1.0, 0.05)(1) == doctest::Approx(0.1));
}

TEST_CASE("prune_leaf applies the rank-1 downdate and retires the node") {
  const WeightedDag d1 = testutil::collider3();
  BuildState state(ensemble_precision(d1, NoiseModel(1.0)));
  Eigen::VectorXd a(3);
  a << 0.8, -1.5, 0.0;
  prune_leaf(state, 2, a, 1.0);

  // hand computation: [[1.64,-1.2],[-1.2,3.25]] - [[0.64,-1.2],[-1.2,2.25]]
  CHECK(state.theta.values(0, 0) == doctest::Approx(1.0));
  CHECK(state.theta.values(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(state.theta.values(0, 1)) < 1e-15);
  CHECK(state.theta.values.row(2).isZero(0.0));
  CHECK(state.theta.values.col(2).isZero(0.0));
  CHECK(state.pruned == std::vector<int>{2});
  CHECK(state.tau == 1);
  CHECK(state.adjacency.row(2) == a.transpose());

  // orphan leaf: zero row leaves the rest of theta untouched
  BuildState eye(PrecisionMatrix(Eigen::MatrixXd::Identity(3, 3)));
  prune_leaf(eye, 0, Eigen::VectorXd::Zero(3), 1.0);
  CHECK(eye.theta.values(1, 1) == 1.0);
  CHECK(eye.theta.values(2, 2) == 1.0);
  CHECK(eye.theta.values(0, 0) == 0.0);

  CHECK_THROWS_AS(prune_leaf(eye, 0, Eigen::VectorXd::Zero(3), 1.0),
                  IndexError);
}

TEST_CASE("pruning a true leaf reproduces the leaf-deleted ensemble "
          "precision") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);  // up to 10 nodes
    const WeightedDag dag = testutil::random_dag(n, 0.4, 0.5, 2.0, seed);
    const NoiseModel noise(seed % 2 == 0 ? 1.0 : 2.0);
    const Eigen::MatrixXd cov = ensemble_covariance(dag, noise).values;

    for (int leaf : leaves(dag)) {
      BuildState state(ensemble_precision(dag, noise));
      const Eigen::VectorXd a = recover_row(state, leaf, noise.sigma2, 0.25);
      prune_leaf(state, leaf, a, noise.sigma2);

      // oracle 1: ensemble precision of the DAG without the leaf
      const Eigen::MatrixXd expected =
          ensemble_precision(delete_node(dag, leaf), noise).values;
      CHECK(testutil::max_abs_diff(state.theta.active_block(), expected) <
            1e-10);

      // oracle 2: brute-force inversion of the restricted covariance
      std::vector<int> alive;
      for (int v = 0; v < n; ++v)
        if (v != leaf) alive.push_back(v);
      const int k = static_cast<int>(alive.size());
      Eigen::MatrixXd sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          sub(r, c) = cov(alive[static_cast<std::size_t>(r)],
                          alive[static_cast<std::size_t>(c)]);
      CHECK(testutil::max_abs_diff(state.theta.active_block(),
                                   Eigen::MatrixXd(sub.inverse())) < 1e-8);

      // diagonal effect: Theta_jj drops by sigma^-2 a_j^2
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("maybe_refresh fires only at checkpoints") {
  const WeightedDag dag = testutil::collider3();
  const NoiseModel noise(1.0);

  BuildState state(ensemble_precision(dag, noise));
  state.checkpoints = {1, 2};
  const Eigen::MatrixXd initial = state.theta.values;
  maybe_refresh(state, nullptr, EstimatorSpec::oracle(dag, noise));
  CHECK(state.refresh_count == 0);  // tau = 0 is not a checkpoint
  CHECK(state.theta.values == initial);

  // at a checkpoint the oracle counts the refresh and keeps the recursion's
  // block, which already equals the restricted ensemble precision
  const Eigen::VectorXd a = recover_row(state, 2, 1.0, 0.25);
  prune_leaf(state, 2, a, 1.0);
  REQUIRE(state.tau == 1);
  maybe_refresh(state, nullptr, EstimatorSpec::oracle(dag, noise));
  CHECK(state.refresh_count == 1);
  const Eigen::MatrixXd expected =
      ensemble_precision(delete_node(dag, 2), noise).values;
  CHECK(testutil::max_abs_diff(state.theta.active_block(), expected) <= 1e-15);

  // a data-driven refresh replaces the active block with the estimate
  const DataMatrix x = sample_data(dag, noise, 5000, 41);
  BuildState fresh(ensemble_precision(dag, noise));
  fresh.checkpoints = {0};
  const Eigen::MatrixXd exact = fresh.theta.values;
  maybe_refresh(fresh, &x, EstimatorSpec::sample_inverse());
  CHECK(fresh.refresh_count == 1);
  CHECK(fresh.theta.values != exact);  // finite-sample estimate, not exact
  CHECK(testutil::max_abs_diff(fresh.theta.values, exact) < 0.5);

  // non-oracle refresh without data is a configuration error
  BuildState broken(ensemble_precision(dag, noise));
  broken.checkpoints = {0};
  CHECK_THROWS_AS(
      maybe_refresh(broken, nullptr, EstimatorSpec::sample_inverse()),
      ConfigError);
}

TEST_CASE("run_build recovers the collider exactly from its ensemble "
          "precision") {
  const WeightedDag d1 = testutil::collider3();
  const BuildResult result =
      run_build(ensemble_precision(d1, NoiseModel(1.0)), oracle_free_config());
  CHECK(!result.incomplete);
  CHECK(result.elimination_order == std::vector<int>{2, 0, 1});
  CHECK(testutil::max_abs_diff(result.a_hat, d1.weights) < 1e-14);
  CHECK(result.refresh_count == 0);
  REQUIRE(result.steps.size() == 3);
  CHECK(result.steps[0].node == 2);
  CHECK(result.steps[0].parent_count == 2);
  CHECK(result.steps[0].diagonal == doctest::Approx(1.0));
}

TEST_CASE("run_build on the identity yields the empty graph") {
  const BuildResult result = run_build(
      PrecisionMatrix(Eigen::MatrixXd::Identity(5, 5)), oracle_free_config());
  CHECK(!result.incomplete);
  CHECK(result.a_hat.isZero(0.0));
  CHECK(result.elimination_order == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("run_build flags an incomplete run when the scan runs dry") {
  // all diagonals below the floor: break immediately
  BuildConfig config = oracle_free_config();
  config.eps_leaf = 0.9;
  const BuildResult result = run_build(
      PrecisionMatrix(0.5 * Eigen::MatrixXd::Identity(3, 3)), config);
  CHECK(result.incomplete);
  CHECK(result.elimination_order.empty());
}

TEST_CASE("run_build exact recovery on a 50-node oracle instance") {
  const WeightedDag dag = sample_er_dag(50, 4.0, 0.5, 2.0, 424242);
  const BuildResult result =
      run_build(ensemble_precision(dag, NoiseModel(1.0)), oracle_free_config());
  CHECK(!result.incomplete);
  CHECK(shd(result.a_hat, dag.weights) == 0);
  CHECK(testutil::max_abs_diff(result.a_hat, dag.weights) <= 1e-6);
}

TEST_CASE("oracle runs pick an actual leaf of the residual graph at every "
          "step") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightedDag dag = sample_er_dag(12, 3.0, 0.5, 2.0, seed);
    const BuildResult result = run_build(
        ensemble_precision(dag, NoiseModel(1.0)), oracle_free_config());
    REQUIRE(!result.incomplete);

    WeightedDag residual = dag;
    for (const StepDiagnostic& step : result.steps) {
      const std::vector<int> lv = leaves(residual);
      CHECK(std::find(lv.begin(), lv.end(), step.node) != lv.end());
      residual.weights.row(step.node).setZero();
      residual.weights.col(step.node).setZero();
    }
  }
}

TEST_CASE("reverse elimination order is a topological order of the output") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightedDag dag = sample_er_dag(15, 3.0, 0.5, 2.0, seed + 100);
    const BuildResult result = run_build(
        ensemble_precision(dag, NoiseModel(1.0)), oracle_free_config());
    REQUIRE(!result.incomplete);

    std::vector<int> order(result.elimination_order.rbegin(),
                           result.elimination_order.rend());
    const WeightedDag estimate(dag.n, result.a_hat);
    CHECK(is_valid_topological_order(estimate, order));
    CHECK_NOTHROW(validate(estimate));
  }
}

TEST_CASE("refresh with the oracle estimator does not change the answer") {
  const WeightedDag dag = sample_er_dag(20, 3.0, 0.5, 2.0, 55);
  const NoiseModel noise(1.0);
  const DataMatrix data = sample_data(dag, noise, 10, 3);
  const PrecisionMatrix theta0 = ensemble_precision(dag, noise);

  BuildConfig config = oracle_free_config();
  config.estimator = EstimatorSpec::oracle(dag, noise);

  const BuildResult base = run_build(theta0, config);
  for (double rho : {0.05, 0.5, 1.0}) {
    BuildConfig with_refresh = config;
    with_refresh.rho = rho;
    const BuildResult refreshed = run_build(theta0, data, with_refresh);
    CHECK(refreshed.a_hat == base.a_hat);  // bit identical
    CHECK(refreshed.elimination_order == base.elimination_order);
  }

  // rho = 0.05 at n = 20 refreshes every node; count refreshes on a full run
  BuildConfig every_step = config;
  every_step.rho = 0.05;
  CHECK(run_build(theta0, data, every_step).refresh_count == 19);
}

TEST_CASE("pre-inactive nodes in theta0 count as pruned from the start") {
  PrecisionMatrix theta(Eigen::MatrixXd::Identity(4, 4));
  theta.active[1] = 0;
  theta.values.row(1).setZero();
  theta.values.col(1).setZero();
  BuildState state{std::move(theta)};
  CHECK(state.pruned == std::vector<int>{1});
  CHECK(state.tau == 1);
  CHECK(state.remaining() == std::vector<int>{0, 2, 3});
}

TEST_CASE("theta0-only runs with rho > 0 are rejected") {
  BuildConfig config = oracle_free_config();
  config.rho = 0.5;
  CHECK_THROWS_AS(
      run_build(PrecisionMatrix(Eigen::MatrixXd::Identity(3, 3)), config),
      ConfigError);
}

TEST_CASE("config validation") {
  BuildConfig config;
  config.sigma2 = 0.0;
  CHECK_THROWS_AS(config.check(), ConfigError);
  config = BuildConfig{};
  config.eps_leaf = 1.5;  // >= 1/sigma2 would skip true leaves
  CHECK_THROWS_AS(config.check(), ConfigError);
  config = BuildConfig{};
  config.eps_edge = 0.0;
  CHECK_THROWS_AS(config.check(), ConfigError);
  config = BuildConfig{};
  config.rho = -0.1;
  CHECK_THROWS_AS(config.check(), ConfigError);
  config = BuildConfig{};
  CHECK_NOTHROW(config.check());
  CHECK(config.effective_eps_leaf() == doctest::Approx(0.5));
  config.sigma2 = 4.0;
  CHECK(config.effective_eps_leaf() == doctest::Approx(0.125));
}

TEST_CASE("run_build from data with the sample-inverse estimator") {
  const WeightedDag dag = chain_dag(4, 0.9);
  const NoiseModel noise(1.0);
  const DataMatrix data = sample_data(dag, noise, 50000, 8);
  BuildConfig config = oracle_free_config();
  config.estimator = EstimatorSpec::sample_inverse();
  const BuildResult result = run_build(data, config);
  CHECK(!result.incomplete);
  CHECK(shd(result.a_hat, dag.weights) == 0);
  CHECK(testutil::max_abs_diff(result.a_hat, dag.weights) < 0.1);
}
