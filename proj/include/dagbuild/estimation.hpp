#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "dagbuild/dag.hpp"
#include "dagbuild/sem.hpp"

namespace dagbuild {

enum class EstimatorKind { Oracle, SampleInverse, RidgeInverse };

// Ground truth referenced by the oracle estimator.
struct OracleSource {
  WeightedDag dag;
  NoiseModel noise;
};

// Pluggable precision estimator. This is the slot a dedicated
// precision-matrix solver would occupy; the three kinds shipped here are
// the oracle (exact ensemble precision of the referenced DAG restricted to
// the surviving nodes), the inverse sample covariance, and its ridge
// regularization.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::SampleInverse;
  // Ridge strength; when absent a scale-aware default of
  // 1e-3 * trace(cov)/n is used.
  std::optional<double> ridge_lambda;
  std::shared_ptr<const OracleSource> oracle_source;
  // Subtract per-variable sample means before forming the covariance. Off by
  // default: the SEM is zero mean by construction.
  bool center = false;

  static EstimatorSpec sample_inverse() { return {}; }

  static EstimatorSpec ridge(std::optional<double> lambda = std::nullopt) {
    EstimatorSpec spec;
    spec.kind = EstimatorKind::RidgeInverse;
    spec.ridge_lambda = lambda;
    return spec;
  }

  static EstimatorSpec oracle(WeightedDag dag, NoiseModel noise) {
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Oracle;
    spec.oracle_source =
        std::make_shared<OracleSource>(OracleSource{std::move(dag), noise});
    return spec;
  }
};

// Row-submatrix of a data matrix together with the map back to global
// indices: row r of data is global variable global_ids[r].
struct RestrictedData {
  DataMatrix data;
  std::vector<int> global_ids;
};

// Sigma_hat = (1/m) X X^T; no mean subtraction unless center is set.
CovarianceMatrix sample_covariance(const DataMatrix& x, bool center = false);

RestrictedData restrict(const DataMatrix& x, const std::vector<int>& nodes);

// Estimate the precision matrix of the variables present in x. For the
// oracle kind the result is the ensemble precision of the referenced DAG's
// induced subgraph on those variables, which equals the true marginal
// precision exactly when the dropped nodes are descendant-closed (pruned
// leaves) -- the situation the build loop guarantees. The result is always
// symmetrized.
PrecisionMatrix estimate_precision(const RestrictedData& x,
                                   const EstimatorSpec& spec);
PrecisionMatrix estimate_precision(const DataMatrix& x,
                                   const EstimatorSpec& spec);

}  // namespace dagbuild
