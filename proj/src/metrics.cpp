#include "dagbuild/metrics.hpp"

#include <algorithm>

namespace dagbuild {

namespace {

void check_dims(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
  if (a_hat.rows() != a_hat.cols() || a_true.rows() != a_true.cols())
    throw DimensionMismatchError("adjacency matrices must be square");
  if (a_hat.rows() != a_true.rows())
    throw DimensionMismatchError("adjacency matrices differ in size");
}

struct PairCounts {
  long long fp = 0;
  long long fn = 0;
  long long reversed = 0;
};

// Edge-operation tally per unordered pair. A pair is in one of four states
// (no edge, either single direction, both); the counts below realize the
// minimum number of single-edge inserts, deletes and reversals between the
// true and estimated states.
PairCounts pair_counts(const Eigen::MatrixXd& a_hat,
                       const Eigen::MatrixXd& a_true) {
  PairCounts counts;
  const int n = static_cast<int>(a_true.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool t_ij = a_true(i, j) != 0.0;  // arc j -> i
      const bool t_ji = a_true(j, i) != 0.0;  // arc i -> j
      const bool e_ij = a_hat(i, j) != 0.0;
      const bool e_ji = a_hat(j, i) != 0.0;
      if (t_ij == e_ij && t_ji == e_ji) continue;
      const int t = static_cast<int>(t_ij) + static_cast<int>(t_ji);
      const int e = static_cast<int>(e_ij) + static_cast<int>(e_ji);
      if (t == 1 && e == 1)
        counts.reversed += 1;
      else if (e > t)
        counts.fp += e - t;
      else
        counts.fn += t - e;
    }
  }
  return counts;
}

}  // namespace

long long shd(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
  check_dims(a_hat, a_true);
  const PairCounts counts = pair_counts(a_hat, a_true);
  return counts.fp + counts.fn + counts.reversed;
}

std::pair<double, double> fdr_tpr(const Eigen::MatrixXd& a_hat,
                                  const Eigen::MatrixXd& a_true) {
  check_dims(a_hat, a_true);
  const int n = static_cast<int>(a_true.rows());
  long long tp = 0, predicted = 0, true_edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool tru = a_true(i, j) != 0.0;
      true_edges += tru;
      if (a_hat(i, j) == 0.0) continue;
      predicted += 1;
      tp += tru;  // anything else is a false discovery (reversed or absent)
    }
  }
  const double fdr = static_cast<double>(predicted - tp) /
                     static_cast<double>(std::max<long long>(1, predicted));
  const double tpr = static_cast<double>(tp) /
                     static_cast<double>(std::max<long long>(1, true_edges));
  return {fdr, tpr};
}

double nmse(const Eigen::MatrixXd& a_hat, const Eigen::MatrixXd& a_true) {
  check_dims(a_hat, a_true);
  const double denom = a_true.squaredNorm();
  if (denom == 0.0) throw ZeroTruthError("nmse requires a nonzero truth");
  return (a_hat - a_true).squaredNorm() / denom;
}

MetricReport evaluate(const Eigen::MatrixXd& a_hat,
                      const Eigen::MatrixXd& a_true) {
  check_dims(a_hat, a_true);
  MetricReport report;
  const PairCounts counts = pair_counts(a_hat, a_true);
  report.fp = counts.fp;
  report.fn = counts.fn;
  report.reversed = counts.reversed;
  report.shd = counts.fp + counts.fn + counts.reversed;
  const auto rates = fdr_tpr(a_hat, a_true);
  report.fdr = rates.first;
  report.tpr = rates.second;
  const int n = static_cast<int>(a_true.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a_hat(i, j) != 0.0 && a_true(i, j) != 0.0) ++report.tp;
  report.nmse = nmse(a_hat, a_true);
  return report;
}

}  // namespace dagbuild
