#include "dagbuild/estimation.hpp"

#include <cmath>
#include <limits>

namespace dagbuild {

namespace {

PrecisionMatrix invert_covariance(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success)
    throw SingularCovarianceError("LDLT factorization failed");

  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  const double d_max = d.maxCoeff();
  const double d_min = d.minCoeff();
  if (!(d_min > n * std::numeric_limits<double>::epsilon() * d_max))
    throw SingularCovarianceError("covariance matrix is numerically singular");

  Eigen::MatrixXd theta = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
  // Refuse results the factorization could not resolve to working accuracy.
  const double residual =
      (cov * theta - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-6 * n))
    throw SingularCovarianceError(
        "covariance matrix is too ill-conditioned to invert reliably");

  theta = 0.5 * (theta + theta.transpose()).eval();
  return PrecisionMatrix(std::move(theta));
}

}  // namespace

CovarianceMatrix sample_covariance(const DataMatrix& x, bool center) {
  if (x.m < 2)
    throw TooFewSamplesError("sample_covariance requires m >= 2 samples");
  CovarianceMatrix cov;
  cov.n = x.n;
  if (center) {
    const Eigen::VectorXd mean = x.values.rowwise().mean();
    const Eigen::MatrixXd centered = x.values.colwise() - mean;
    cov.values = (centered * centered.transpose()) / static_cast<double>(x.m);
  } else {
    cov.values = (x.values * x.values.transpose()) / static_cast<double>(x.m);
  }
  cov.values = 0.5 * (cov.values + cov.values.transpose()).eval();
  return cov;
}

RestrictedData restrict(const DataMatrix& x, const std::vector<int>& nodes) {
  if (nodes.empty())
    throw EmptySelectionError("restrict requires a nonempty node list");
  std::vector<char> seen(static_cast<std::size_t>(x.n), 0);
  for (int v : nodes) {
    if (v < 0 || v >= x.n)
      throw IndexError("restrict: node " + std::to_string(v) + " out of range");
    if (seen[static_cast<std::size_t>(v)]++)
      throw IndexError("restrict: duplicate node " + std::to_string(v));
  }
  RestrictedData out;
  out.global_ids = nodes;
  Eigen::MatrixXd sub(static_cast<int>(nodes.size()), x.m);
  for (std::size_t r = 0; r < nodes.size(); ++r)
    sub.row(static_cast<int>(r)) = x.values.row(nodes[r]);
  out.data = DataMatrix(std::move(sub));
  return out;
}

PrecisionMatrix estimate_precision(const RestrictedData& x,
                                   const EstimatorSpec& spec) {
  const int n = x.data.n;
  switch (spec.kind) {
    case EstimatorKind::Oracle: {
      if (!spec.oracle_source)
        throw ConfigError("oracle estimator requires an oracle source");
      const WeightedDag& full = spec.oracle_source->dag;
      WeightedDag sub(n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          sub.weights(r, c) =
              full.weights(x.global_ids[static_cast<std::size_t>(r)],
                           x.global_ids[static_cast<std::size_t>(c)]);
      return ensemble_precision(sub, spec.oracle_source->noise);
    }
    case EstimatorKind::SampleInverse: {
      if (x.data.m < n)
        throw TooFewSamplesError(
            "sample-inverse estimator requires m >= n (m=" +
            std::to_string(x.data.m) + ", n=" + std::to_string(n) + ")");
      const CovarianceMatrix cov = sample_covariance(x.data, spec.center);
      return invert_covariance(cov.values);
    }
    case EstimatorKind::RidgeInverse: {
      const CovarianceMatrix cov = sample_covariance(x.data, spec.center);
      double lambda;
      if (spec.ridge_lambda) {
        lambda = *spec.ridge_lambda;
        if (lambda < 0.0)
          throw InvalidParameterError("ridge_lambda must be nonnegative");
        if (lambda == 0.0 && x.data.m < n)
          throw TooFewSamplesError(
              "ridge estimator with lambda = 0 requires m >= n");
      } else {
        lambda = 1e-3 * cov.values.trace() / static_cast<double>(n);
      }
      const Eigen::MatrixXd shifted =
          cov.values + lambda * Eigen::MatrixXd::Identity(n, n);
      return invert_covariance(shifted);
    }
  }
  throw ConfigError("unknown estimator kind");
}

PrecisionMatrix estimate_precision(const DataMatrix& x,
                                   const EstimatorSpec& spec) {
  RestrictedData full;
  full.data = x;
  full.global_ids.resize(static_cast<std::size_t>(x.n));
  for (int i = 0; i < x.n; ++i)
    full.global_ids[static_cast<std::size_t>(i)] = i;
  return estimate_precision(full, spec);
}

}  // namespace dagbuild
