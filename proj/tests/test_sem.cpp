#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dagbuild/sem.hpp"
#include "helpers.hpp"

using namespace dagbuild;

TEST_CASE("ensemble_covariance on the empty graph and the 2-chain") {
  CHECK(ensemble_covariance(WeightedDag(3), NoiseModel(1.0)).values ==
        Eigen::MatrixXd::Identity(3, 3));

  // oracle: explicit 2x2 solve, (I - A)^-1 = [[1,0],[2,1]]
  const CovarianceMatrix cov =
      ensemble_covariance(chain_dag(2, 2.0), NoiseModel(1.0));
  Eigen::MatrixXd expected(2, 2);
  expected << 1.0, 2.0, 2.0, 5.0;
  CHECK(testutil::max_abs_diff(cov.values, expected) < 1e-14);
}

TEST_CASE("ensemble precision and covariance are mutual inverses") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightedDag dag = testutil::random_dag(50, 0.1, 0.5, 2.0, seed);
    const NoiseModel noise(seed % 2 == 0 ? 1.0 : 0.5);
    const Eigen::MatrixXd product =
        ensemble_covariance(dag, noise).values *
        ensemble_precision(dag, noise).values;
    CHECK(testutil::max_abs_diff(product, Eigen::MatrixXd::Identity(50, 50)) <
          1e-8);
  }
}

TEST_CASE("ensemble_precision worked examples") {
  // oracle: direct evaluation of sigma^-2 (I - A^T)(I - A)
  const WeightedDag d1 = testutil::collider3();
  Eigen::MatrixXd expected(3, 3);
  expected << 1.64, -1.2, -0.8, -1.2, 3.25, 1.5, -0.8, 1.5, 1.0;
  const PrecisionMatrix theta = ensemble_precision(d1, NoiseModel(1.0));
  CHECK(testutil::max_abs_diff(theta.values, expected) < 1e-15);
  CHECK(theta.active_count() == 3);
  CHECK(theta.is_symmetric());

  CHECK(ensemble_precision(WeightedDag(3), NoiseModel(4.0)).values ==
        0.25 * Eigen::MatrixXd::Identity(3, 3));

  Eigen::MatrixXd chain2(2, 2);
  chain2 << 5.0, -2.0, -2.0, 1.0;
  CHECK(testutil::max_abs_diff(
            ensemble_precision(chain_dag(2, 2.0), NoiseModel(1.0)).values,
            chain2) < 1e-15);
}

TEST_CASE("theta_entry worked examples") {
  const WeightedDag d1 = testutil::collider3();
  const NoiseModel unit(1.0);
  CHECK(theta_entry(d1, unit, 0, 0) == doctest::Approx(1.64).epsilon(1e-14));
  CHECK(theta_entry(d1, unit, 0, 1) == doctest::Approx(-1.2).epsilon(1e-14));
  CHECK(theta_entry(d1, unit, 2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(theta_entry(d1, unit, 3, 0), IndexError);
}

TEST_CASE("theta_entry equals ensemble_precision on random DAGs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);  // up to 8 nodes
    const WeightedDag dag = testutil::random_dag(n, 0.5, 0.5, 2.0, seed);
    const NoiseModel noise(0.5 + 0.25 * static_cast<double>(seed % 5));
    const PrecisionMatrix theta = ensemble_precision(dag, noise);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(theta_entry(dag, noise, i, j) - theta.values(i, j)) <=
              1e-12);
  }
}

TEST_CASE("resolution_gap") {
  const WeightedDag d1 = testutil::collider3();
  CHECK(resolution_gap(d1, NoiseModel(1.0)) == doctest::Approx(0.64));
  CHECK(resolution_gap(chain_dag(5, 1.5), NoiseModel(1.0)) ==
        doctest::Approx(2.25));
  CHECK(resolution_gap(d1, NoiseModel(4.0)) == doctest::Approx(0.16));
  CHECK_THROWS_AS(resolution_gap(WeightedDag(3), NoiseModel(1.0)),
                  NoEdgesError);
}

TEST_CASE("leaf diagonals sit at 1/sigma2, non-leaves at least a gap above") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const WeightedDag dag = testutil::random_dag(10, 0.35, 0.5, 2.0, seed);
    if (dag.edge_count() == 0) continue;
    const NoiseModel noise(seed % 3 == 0 ? 2.0 : 1.0);
    const double inv_s2 = 1.0 / noise.sigma2;
    const double gap = resolution_gap(dag, noise);
    const PrecisionMatrix theta = ensemble_precision(dag, noise);

    const std::vector<int> true_leaves = leaves(dag);
    std::vector<int> by_diagonal;
    for (int i = 0; i < dag.n; ++i) {
      const double diag = theta.values(i, i);
      if (std::abs(diag - inv_s2) < gap / 2.0) by_diagonal.push_back(i);
      if (std::find(true_leaves.begin(), true_leaves.end(), i) ==
          true_leaves.end())
        CHECK(diag >= inv_s2 + gap - 1e-12);
      else
        CHECK(diag == doctest::Approx(inv_s2).epsilon(1e-14));
    }
    CHECK(by_diagonal == true_leaves);
  }
}

TEST_CASE("precision support is contained in the moralized graph") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const WeightedDag dag = testutil::random_dag(9, 0.4, 0.5, 2.0, seed);
    const PrecisionMatrix theta = ensemble_precision(dag, NoiseModel(1.0));
    const UndirectedGraph moral = moralize(dag);
    for (int i = 0; i < dag.n; ++i)
      for (int j = 0; j < dag.n; ++j)
        if (i != j && std::abs(theta.values(i, j)) > 1e-12)
          CHECK(moral.has_edge(i, j));
  }
}

TEST_CASE("sample_data: determinism and empty-graph covariance") {
  const WeightedDag empty(4);
  const DataMatrix x = sample_data(empty, NoiseModel(1.0), 100000, 11);
  const DataMatrix y = sample_data(empty, NoiseModel(1.0), 100000, 11);
  CHECK(x.values == y.values);

  // Monte-Carlo: X = Z so the sample covariance approaches the identity
  const Eigen::MatrixXd cov =
      (x.values * x.values.transpose()) / static_cast<double>(x.m);
  CHECK(testutil::max_abs_diff(cov, Eigen::MatrixXd::Identity(4, 4)) < 0.05);

  CHECK_THROWS_AS(sample_data(empty, NoiseModel(1.0), 0, 1),
                  InvalidParameterError);
}

TEST_CASE("sample covariance converges to the ensemble covariance") {
  const WeightedDag dag = testutil::random_dag(8, 0.4, 0.5, 1.5, 3);
  const NoiseModel noise(1.0);
  const Eigen::MatrixXd target = ensemble_covariance(dag, noise).values;

  const DataMatrix x = sample_data(dag, noise, 100000, 17);
  const Eigen::MatrixXd cov =
      (x.values * x.values.transpose()) / static_cast<double>(x.m);
  CHECK((cov - target).norm() / target.norm() < 0.05);
}

TEST_CASE("sample covariance error decreases with m (median over seeds)") {
  const WeightedDag dag = testutil::random_dag(10, 0.3, 0.5, 1.5, 21);
  const NoiseModel noise(1.0);
  const Eigen::MatrixXd target = ensemble_covariance(dag, noise).values;
  std::vector<double> medians;
  for (int m : {1000, 10000, 100000}) {
    std::vector<double> errors;
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
      const DataMatrix x = sample_data(dag, noise, m, seed);
      const Eigen::MatrixXd cov =
          (x.values * x.values.transpose()) / static_cast<double>(x.m);
      errors.push_back((cov - target).norm());
    }
    std::sort(errors.begin(), errors.end());
    medians.push_back(errors[errors.size() / 2]);
  }
  CHECK(medians[1] <= medians[0]);
  CHECK(medians[2] <= medians[1]);
}

TEST_CASE("condition_number: identity, closed-form 2x2, chain growth law") {
  CHECK(condition_number(PrecisionMatrix(Eigen::MatrixXd::Identity(5, 5))) ==
        doctest::Approx(1.0));

  // 2x2 oracle: trace 6, det 1 -> eigenvalues 3 +- 2 sqrt(2)
  const PrecisionMatrix chain2 =
      ensemble_precision(chain_dag(2, 2.0), NoiseModel(1.0));
  const double expected =
      (3.0 + 2.0 * std::sqrt(2.0)) / (3.0 - 2.0 * std::sqrt(2.0));
  CHECK(condition_number(chain2) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(expected == doctest::Approx(33.97).epsilon(1e-3));

  // cond(Theta_{N+1}) / cond(Theta_N) approaches k^2
  const double k = 1.5;
  std::vector<double> cond;
  for (int n = 10; n <= 21; ++n)
    cond.push_back(
        condition_number(ensemble_precision(chain_dag(n, k), NoiseModel(1.0))));
  for (std::size_t i = 0; i + 1 < cond.size(); ++i) {
    const double ratio = cond[i + 1] / cond[i];
    CHECK(ratio > 0.8 * k * k);
    CHECK(ratio < 1.2 * k * k);
  }

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(condition_number(PrecisionMatrix(indefinite)),
                  NotPositiveDefiniteError);
}

TEST_CASE("noise model rejects nonpositive variances") {
  CHECK_THROWS_AS(NoiseModel(0.0), InvalidParameterError);
  CHECK_THROWS_AS(NoiseModel(-1.0), InvalidParameterError);
}
