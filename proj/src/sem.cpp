#include "dagbuild/sem.hpp"

#include <cmath>

#include "dagbuild/rng.hpp"

namespace dagbuild {

bool PrecisionMatrix::is_symmetric(double rel_tol) const {
  const double scale = values.cwiseAbs().maxCoeff();
  const double tol = rel_tol * std::max(scale, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values(i, j) - values(j, i)) > tol) return false;
  return true;
}

Eigen::MatrixXd PrecisionMatrix::active_block() const {
  const std::vector<int> nodes = active_nodes();
  const int k = static_cast<int>(nodes.size());
  Eigen::MatrixXd block(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      block(r, c) = values(nodes[static_cast<std::size_t>(r)],
                           nodes[static_cast<std::size_t>(c)]);
  return block;
}

CovarianceMatrix ensemble_covariance(const WeightedDag& dag,
                                     const NoiseModel& noise) {
  const int n = dag.n;
  const TopologicalOrder order = topological_order(dag);

  // In topological order I - A is unit lower triangular.
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < r; ++c)
      b(r, c) = -dag.weights(order[static_cast<std::size_t>(r)],
                             order[static_cast<std::size_t>(c)]);

  const Eigen::MatrixXd w = b.triangularView<Eigen::UnitLower>().solve(
      Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd sigma_perm = noise.sigma2 * (w * w.transpose());

  CovarianceMatrix cov;
  cov.n = n;
  cov.values.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      cov.values(order[static_cast<std::size_t>(r)],
                 order[static_cast<std::size_t>(c)]) = sigma_perm(r, c);
  cov.values = 0.5 * (cov.values + cov.values.transpose()).eval();
  return cov;
}

PrecisionMatrix ensemble_precision(const WeightedDag& dag,
                                   const NoiseModel& noise) {
  validate(dag);
  const int n = dag.n;
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) - dag.weights;
  Eigen::MatrixXd theta = (b.transpose() * b) / noise.sigma2;
  theta = 0.5 * (theta + theta.transpose()).eval();
  return PrecisionMatrix(std::move(theta));
}

double theta_entry(const WeightedDag& dag, const NoiseModel& noise, int i,
                   int j) {
  if (i < 0 || i >= dag.n || j < 0 || j >= dag.n)
    throw IndexError("theta_entry index out of range");
  const double inv_s2 = 1.0 / noise.sigma2;
  if (i == j) {
    double sum = 0.0;
    for (int k = 0; k < dag.n; ++k) {
      const double w = dag.weights(k, i);
      sum += w * w;
    }
    return inv_s2 * (1.0 + sum);
  }
  double sum = 0.0;
  for (int k = 0; k < dag.n; ++k) sum += dag.weights(k, i) * dag.weights(k, j);
  return inv_s2 * (-dag.weights(i, j) - dag.weights(j, i) + sum);
}

double resolution_gap(const WeightedDag& dag, const NoiseModel& noise) {
  double min_sq = -1.0;
  for (int i = 0; i < dag.n; ++i) {
    for (int j = 0; j < dag.n; ++j) {
      const double w = dag.weights(i, j);
      if (w != 0.0 && (min_sq < 0.0 || w * w < min_sq)) min_sq = w * w;
    }
  }
  if (min_sq < 0.0) throw NoEdgesError("resolution_gap requires an edge");
  return min_sq / noise.sigma2;
}

DataMatrix sample_data(const WeightedDag& dag, const NoiseModel& noise, int m,
                       std::uint64_t seed) {
  if (m < 1) throw InvalidParameterError("sample_data requires m >= 1");
  const int n = dag.n;
  const TopologicalOrder order = topological_order(dag);

  Rng rng(seed);
  const double sd = std::sqrt(noise.sigma2);
  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < m; ++s) x(i, s) = sd * rng.normal();

  // x_i = z_i + sum_j A_ij x_j; parents are already resolved in this order
  for (int idx = 0; idx < n; ++idx) {
    const int i = order[static_cast<std::size_t>(idx)];
    for (int j = 0; j < n; ++j) {
      const double w = dag.weights(i, j);
      if (w != 0.0) x.row(i) += w * x.row(j);
    }
  }
  return DataMatrix(std::move(x));
}

double condition_number(const PrecisionMatrix& theta) {
  const Eigen::MatrixXd block = theta.active_block();
  if (block.rows() == 0)
    throw InvalidParameterError("condition_number of an empty active set");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NotPositiveDefiniteError("eigenvalue computation failed");
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (!(lo > 0.0))
    throw NotPositiveDefiniteError(
        "precision matrix is not positive definite on its active set");
  return hi / lo;
}

}  // namespace dagbuild
