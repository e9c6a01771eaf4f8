#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dagbuild/dag.hpp"
#include "dagbuild/errors.hpp"

namespace dagbuild {

// Common exogenous noise variance sigma^2 of the linear SEM; known, never
// estimated.
struct NoiseModel {
  double sigma2 = 1.0;

  NoiseModel() = default;
  NoiseModel(double s) : sigma2(s) {  // NOLINT: implicit by design
    if (!(s > 0.0)) throw InvalidParameterError("sigma2 must be positive");
  }
};

struct CovarianceMatrix {
  int n = 0;
  Eigen::MatrixXd values;
};

// Symmetric precision matrix over an active node set. Rows and columns of
// inactive nodes are identically zero; the active submatrix is positive
// definite when produced by the ensemble or estimation operations.
struct PrecisionMatrix {
  int n = 0;
  Eigen::MatrixXd values;
  std::vector<char> active;

  PrecisionMatrix() = default;
  explicit PrecisionMatrix(Eigen::MatrixXd v)
      : n(static_cast<int>(v.rows())),
        values(std::move(v)),
        active(static_cast<std::size_t>(n), 1) {
    if (values.rows() != values.cols())
      throw DimensionMismatchError("precision matrix must be square");
  }

  bool is_active(int i) const { return active[static_cast<std::size_t>(i)] != 0; }

  int active_count() const {
    int count = 0;
    for (char a : active) count += (a != 0);
    return count;
  }

  std::vector<int> active_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
      if (is_active(i)) out.push_back(i);
    return out;
  }

  bool is_symmetric(double rel_tol = 1e-12) const;

  // active submatrix in ascending node order
  Eigen::MatrixXd active_block() const;
};

// N variables x M samples.
struct DataMatrix {
  int n = 0;
  int m = 0;
  Eigen::MatrixXd values;

  DataMatrix() = default;
  explicit DataMatrix(Eigen::MatrixXd v)
      : n(static_cast<int>(v.rows())),
        m(static_cast<int>(v.cols())),
        values(std::move(v)) {}
};

// Sigma = sigma^2 (I - A)^-1 (I - A^T)^-1, formed by a unit-triangular solve
// in topological order; never by general inversion.
CovarianceMatrix ensemble_covariance(const WeightedDag& dag,
                                     const NoiseModel& noise);

// Theta = sigma^-2 (I - A^T)(I - A), all nodes active.
PrecisionMatrix ensemble_precision(const WeightedDag& dag,
                                   const NoiseModel& noise);

// Closed-form entry of the ensemble precision matrix:
//   diagonal      sigma^-2 (1 + sum_{k in CH_i} A_ki^2)
//   off-diagonal  sigma^-2 (-A_ij - A_ji + sum_{k in CH_i ^ CH_j} A_ki A_kj)
// At most one of A_ij, A_ji is nonzero in a DAG, so this agrees with the
// lower-triangular form under topological labeling and is symmetric in
// (i, j) for any labeling.
double theta_entry(const WeightedDag& dag, const NoiseModel& noise, int i,
                   int j);

// Delta = sigma^-2 min over edges of A_ij^2: the guaranteed diagonal
// separation between leaf and non-leaf nodes.
double resolution_gap(const WeightedDag& dag, const NoiseModel& noise);

// X = (I - A)^-1 Z with Z iid N(0, sigma^2), solved by forward substitution
// in topological order. Deterministic for a given seed (Philox4x64 stream,
// Gaussians filled row-major).
DataMatrix sample_data(const WeightedDag& dag, const NoiseModel& noise, int m,
                       std::uint64_t seed);

// Ratio of extreme eigenvalues of the active submatrix.
double condition_number(const PrecisionMatrix& theta);

}  // namespace dagbuild
