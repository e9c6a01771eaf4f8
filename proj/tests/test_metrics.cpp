#include <doctest.h>

#include <vector>

#include "dagbuild/metrics.hpp"
#include "helpers.hpp"

using namespace dagbuild;

namespace {

// 3-node digraph from a 6-bit mask over the off-diagonal slots
Eigen::MatrixXd graph_from_mask(unsigned mask) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  int bit = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        if (mask & (1u << bit)) a(i, j) = 1.0;
        ++bit;
      }
  return a;
}

Eigen::MatrixXd single_edge(int child, int parent, int n = 3) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a(child, parent) = 1.0;
  return a;
}

}  // namespace

TEST_CASE("shd worked examples") {
  const Eigen::MatrixXd truth = single_edge(1, 0);  // arc 0 -> 1
  CHECK(shd(truth, truth) == 0);

  // reversal counts once
  CHECK(shd(single_edge(0, 1), truth) == 1);

  // one deletion
  Eigen::MatrixXd two_edges = Eigen::MatrixXd::Zero(3, 3);
  two_edges(1, 0) = 1.0;  // 0 -> 1
  two_edges(2, 0) = 1.0;  // 0 -> 2
  CHECK(shd(single_edge(1, 0), two_edges) == 1);

  CHECK_THROWS_AS(shd(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)),
                  DimensionMismatchError);
}

TEST_CASE("fdr and tpr worked examples") {
  const Eigen::MatrixXd truth = single_edge(1, 0);

  CHECK(fdr_tpr(truth, truth) == std::pair<double, double>{0.0, 1.0});
  CHECK(fdr_tpr(Eigen::MatrixXd::Zero(3, 3), truth) ==
        std::pair<double, double>{0.0, 0.0});
  // a reversed edge is a false discovery and no true positive
  CHECK(fdr_tpr(single_edge(0, 1), truth) ==
        std::pair<double, double>{1.0, 0.0});
}

TEST_CASE("nmse worked examples") {
  const WeightedDag dag = testutil::random_dag(5, 0.5, 0.5, 2.0, 2);
  REQUIRE(dag.edge_count() > 0);
  const Eigen::MatrixXd truth = dag.weights;
  CHECK(nmse(truth, truth) == 0.0);
  CHECK(nmse(Eigen::MatrixXd::Zero(5, 5), truth) == doctest::Approx(1.0));
  CHECK(nmse(2.0 * truth, truth) == doctest::Approx(1.0));
  CHECK_THROWS_AS(nmse(truth, Eigen::MatrixXd::Zero(5, 5)), ZeroTruthError);
}

TEST_CASE("nmse is invariant under simultaneous permutation") {
  const WeightedDag dag = testutil::random_dag(6, 0.4, 0.5, 2.0, 4);
  const Eigen::MatrixXd est = testutil::random_dag(6, 0.4, 0.5, 2.0, 5).weights;
  const double base = nmse(est, dag.weights);

  const std::vector<int> perm = {3, 1, 5, 0, 2, 4};
  Eigen::MatrixXd pt(6, 6), pe(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      pt(r, c) = dag.weights(perm[static_cast<std::size_t>(r)],
                             perm[static_cast<std::size_t>(c)]);
      pe(r, c) = est(perm[static_cast<std::size_t>(r)],
                     perm[static_cast<std::size_t>(c)]);
    }
  CHECK(nmse(pe, pt) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("report counts are consistent and rates bounded") {
  for (unsigned t = 0; t < 64; ++t) {
    for (unsigned e = 0; e < 64; ++e) {
      const Eigen::MatrixXd truth = graph_from_mask(t);
      const Eigen::MatrixXd est = graph_from_mask(e);
      if (truth.squaredNorm() == 0.0) continue;
      const MetricReport report = evaluate(est, truth);
      CHECK(report.shd == report.fp + report.fn + report.reversed);
      CHECK(report.fdr >= 0.0);
      CHECK(report.fdr <= 1.0);
      CHECK(report.tpr >= 0.0);
      CHECK(report.tpr <= 1.0);
      // fdr + precision = 1 whenever something was predicted
      long long predicted = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) predicted += (est(i, j) != 0.0);
      if (predicted > 0)
        CHECK(report.fdr + static_cast<double>(report.tp) /
                               static_cast<double>(predicted) ==
              doctest::Approx(1.0));
    }
  }
}

TEST_CASE("shd is a metric on 3-node digraphs (exhaustive)") {
  // distance table over all 64 supports
  std::vector<std::vector<long long>> dist(64, std::vector<long long>(64, 0));
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b)
      dist[a][b] = shd(graph_from_mask(a), graph_from_mask(b));

  for (unsigned a = 0; a < 64; ++a) {
    CHECK(dist[a][a] == 0);
    for (unsigned b = 0; b < 64; ++b) {
      CHECK(dist[a][b] == dist[b][a]);  // symmetry
      if (a != b) CHECK(dist[a][b] > 0);
    }
  }
  // triangle inequality over every triple
  for (unsigned a = 0; a < 64; ++a)
    for (unsigned b = 0; b < 64; ++b)
      for (unsigned c = 0; c < 64; ++c)
        CHECK(dist[a][c] <= dist[a][b] + dist[b][c]);
}
