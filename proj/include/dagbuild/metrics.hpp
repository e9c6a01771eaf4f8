#pragma once

#include <Eigen/Dense>
#include <utility>

#include "dagbuild/errors.hpp"

namespace dagbuild {

// Structure and weight recovery scores. Supports are taken as-is (entry
// != 0); thresholding is the caller's concern. Counting conventions, per
// unordered node pair:
//   tp       estimated edges with the correct direction
//   reversed estimated edges whose opposite direction is the true one
//   fp       estimated edges whose pair carries no true edge either way
//   fn       true edges absent from the estimate in both directions
// so shd = fp + fn + reversed, a reversal costing one operation.
struct MetricReport {
  long long shd = 0;
  double fdr = 0.0;
  double tpr = 0.0;
  double nmse = 0.0;
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long reversed = 0;
};

long long shd(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true);

// FDR = (fp + reversed) / max(1, predicted edges),
// TPR = tp / max(1, true edges); both 0 when their denominator vanishes.
std::pair<double, double> fdr_tpr(const Eigen::MatrixXd& a_hat,
                                  const Eigen::MatrixXd& a_true);

// Squared Frobenius error normalized by the truth's squared Frobenius norm.
double nmse(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true);

MetricReport evaluate(const Eigen::MatrixXd& a_hat,
                      const Eigen::MatrixXd& a_true);

}  // namespace dagbuild
