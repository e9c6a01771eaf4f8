#include "dagbuild/build.hpp"

#include <cmath>

namespace dagbuild {

void BuildConfig::check() const {
  if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  const double floor = effective_eps_leaf();
  if (!(floor > 0.0)) throw ConfigError("eps_leaf must be positive");
  if (!(floor < 1.0 / sigma2))
    throw ConfigError("eps_leaf must stay below 1/sigma2 or true leaves would be skipped");
  if (!(eps_edge > 0.0)) throw ConfigError("eps_edge must be positive");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
}

BuildState::BuildState(PrecisionMatrix theta0)
    : theta(std::move(theta0)),
      in_pruned(static_cast<std::size_t>(theta.n), 0),
      adjacency(Eigen::MatrixXd::Zero(theta.n, theta.n)) {
  // nodes already inactive in theta0 count as pruned from the start
  for (int i = 0; i < theta.n; ++i) {
    if (!theta.is_active(i)) {
      in_pruned[static_cast<std::size_t>(i)] = 1;
      pruned.push_back(i);
    }
  }
  tau = static_cast<int>(pruned.size());
}

std::vector<int> BuildState::remaining() const {
  std::vector<int> out;
  for (int i = 0; i < theta.n; ++i)
    if (!in_pruned[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::set<int> refresh_checkpoints(int n, double rho) {
  if (n < 1) throw InvalidParameterError("refresh_checkpoints requires n >= 1");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidParameterError("rho must lie in [0, 1]");
  std::set<int> checkpoints;
  for (int t = 1; t <= n - 1; ++t) {
    const double p = static_cast<double>(t) * rho * static_cast<double>(n);
    // floor with a guard against products like 3 * 0.005 * 200 landing one
    // ulp under the integer they equal exactly
    const double r = std::round(p);
    const long v = (std::abs(p - r) < 1e-8) ? static_cast<long>(r)
                                            : static_cast<long>(std::floor(p));
    if (v >= 1 && v <= n - 1) checkpoints.insert(static_cast<int>(v));
  }
  return checkpoints;
}

std::optional<int> find_leaf(const BuildState& state, double eps_leaf) {
  int best = -1;
  double best_diag = 0.0;
  for (int u = 0; u < state.theta.n; ++u) {
    if (state.in_pruned[static_cast<std::size_t>(u)]) continue;
    const double diag = state.theta.values(u, u);
    if (diag < eps_leaf) continue;
    if (best < 0 || diag < best_diag) {
      best = u;
      best_diag = diag;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

Eigen::VectorXd recover_row(const BuildState& state, int i, double sigma2,
                            double eps_edge) {
  if (i < 0 || i >= state.theta.n || state.in_pruned[static_cast<std::size_t>(i)])
    throw IndexError("recover_row: node " + std::to_string(i) +
                     " is not an active node");
  Eigen::VectorXd a = -sigma2 * state.theta.values.row(i).transpose();
  a(i) = 0.0;
  for (int j = 0; j < state.theta.n; ++j)
    if (std::abs(a(j)) < eps_edge) a(j) = 0.0;
  return a;
}

void prune_leaf(BuildState& state, int i, const Eigen::VectorXd& a,
                double sigma2) {
  if (i < 0 || i >= state.theta.n || state.in_pruned[static_cast<std::size_t>(i)])
    throw IndexError("prune_leaf: node " + std::to_string(i) +
                     " is not an active node");
  const double inv_s2 = 1.0 / sigma2;
  Eigen::MatrixXd& theta = state.theta.values;
  for (int j = 0; j < state.theta.n; ++j) {
    if (a(j) != 0.0) theta.row(j) -= (inv_s2 * a(j)) * a.transpose();
  }
  theta.row(i).setZero();
  theta.col(i).setZero();
  state.theta.active[static_cast<std::size_t>(i)] = 0;
  state.in_pruned[static_cast<std::size_t>(i)] = 1;
  state.pruned.push_back(i);
  state.tau += 1;
  state.adjacency.row(i) = a.transpose();
}

void maybe_refresh(BuildState& state, const DataMatrix* x,
                   const EstimatorSpec& spec) {
  if (state.checkpoints.count(state.tau) == 0) return;
  const std::vector<int> active = state.remaining();
  if (active.empty()) return;

  if (spec.kind == EstimatorKind::Oracle) {
    // The oracle's restricted precision is the ensemble precision of the
    // residual ground-truth graph: bit for bit the matrix the pruning
    // recursion already maintains. The block stays in place, the counter
    // moves.
    if (!spec.oracle_source)
      throw ConfigError("oracle estimator requires an oracle source");
    state.refresh_count += 1;
    return;
  }

  if (x == nullptr)
    throw ConfigError("refresh requested but no data matrix was provided");
  const PrecisionMatrix estimate =
      estimate_precision(restrict(*x, active), spec);
  const int k = static_cast<int>(active.size());
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      state.theta.values(active[static_cast<std::size_t>(r)],
                         active[static_cast<std::size_t>(c)]) =
          estimate.values(r, c);
  state.refresh_count += 1;
}

namespace {

BuildResult run_build_impl(PrecisionMatrix theta0, const DataMatrix* x,
                           const BuildConfig& config) {
  config.check();
  const int n = theta0.n;
  if (n == 0) throw ConfigError("run_build requires a nonempty matrix");
  if (x != nullptr && x->n != n)
    throw DimensionMismatchError("data matrix and precision dimension differ");

  BuildState state(std::move(theta0));
  state.checkpoints = refresh_checkpoints(n, config.rho);
  const double eps_leaf = config.effective_eps_leaf();
  const double inv_s2 = 1.0 / config.sigma2;

  BuildResult result;
  while (static_cast<int>(state.pruned.size()) < n) {
    maybe_refresh(state, x, config.estimator);
    const std::optional<int> leaf = find_leaf(state, eps_leaf);
    if (!leaf) {
      result.incomplete = true;
      break;
    }
    const int i = *leaf;
    StepDiagnostic step;
    step.node = i;
    step.diagonal = state.theta.values(i, i);
    const Eigen::VectorXd a =
        recover_row(state, i, config.sigma2, config.eps_edge);
    prune_leaf(state, i, a, config.sigma2);
    for (int j = 0; j < n; ++j) step.parent_count += (a(j) != 0.0);
    if (config.max_parent_check) {
      step.suspect = std::abs(step.diagonal - inv_s2) > 0.5 * inv_s2;
      result.suspect_leaf_count += step.suspect;
    }
    result.steps.push_back(step);
  }

  result.a_hat = state.adjacency;
  result.elimination_order = state.pruned;
  result.refresh_count = state.refresh_count;

  // Structural sanity: every recovered row may only reference nodes that were
  // eliminated later (or never, on an incomplete run), which is exactly what
  // makes the output acyclic by construction.
  std::vector<int> position(static_cast<std::size_t>(n), n);
  for (std::size_t pos = 0; pos < result.elimination_order.size(); ++pos)
    position[static_cast<std::size_t>(result.elimination_order[pos])] =
        static_cast<int>(pos);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (result.a_hat(i, j) != 0.0 &&
          position[static_cast<std::size_t>(j)] <=
              position[static_cast<std::size_t>(i)])
        throw Error("internal: recovered row references an earlier node");
    }
  }
  return result;
}

}  // namespace

BuildResult run_build(const PrecisionMatrix& theta0,
                      const BuildConfig& config) {
  if (config.rho > 0.0)
    throw ConfigError(
        "rho > 0 requires a data matrix to refresh from; pass one or set rho = 0");
  return run_build_impl(theta0, nullptr, config);
}

BuildResult run_build(const DataMatrix& x, const BuildConfig& config) {
  PrecisionMatrix theta0 = estimate_precision(x, config.estimator);
  return run_build_impl(std::move(theta0), &x, config);
}

BuildResult run_build(const PrecisionMatrix& theta0, const DataMatrix& x,
                      const BuildConfig& config) {
  return run_build_impl(theta0, &x, config);
}

}  // namespace dagbuild
