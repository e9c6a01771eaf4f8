#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagbuild/build.hpp"
#include "dagbuild/metrics.hpp"

namespace dagbuild {

// One benchmark method: a label plus the build configuration it runs with.
// The estimator's oracle source, when the kind is Oracle, is bound to each
// trial's ground truth at run time.
struct MethodSpec {
  std::string label;
  BuildConfig config;
};

struct ExperimentSpec {
  int n = 20;
  double expected_degree = 2.0;
  std::vector<int> m_list;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
  double sigma2 = 1.0;
  int trials = 10;
  std::uint64_t base_seed = 1;
  int workers = 1;
  std::vector<MethodSpec> methods;

  void check() const;  // throws ConfigError
};

struct TrialRecord {
  std::string method;
  int m = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  MetricReport metrics;
  double runtime_s = 0.0;  // estimation + build phases only
  int refresh_count = 0;
  bool incomplete = false;
  std::string failure;  // empty on success

  bool failed() const { return !failure.empty(); }
};

// Per-trial protocol: the DAG is drawn with seed = base_seed + trial, data
// with the same seed; every method then runs on the same (DAG, data) pair.
// Failures are recorded in the TrialRecord, never aborting the sweep.
// Records come back in (method, m, trial) order regardless of worker count.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

struct SummaryRow {
  std::string method;
  int m = 0;
  int trials = 0;
  int failures = 0;
  // absent when every trial in the group failed
  std::optional<Stats> shd, fdr, tpr, nmse, runtime_s;
};

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

// CSV schema:
// method,m,trial,seed,shd,fdr,tpr,nmse,runtime_s,refresh_count,incomplete,failure
std::string records_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

// strips the runtime_s column; used by the determinism check
std::string csv_without_runtime(const std::string& csv);

// JSON config file <-> spec (flat keys plus a "methods" array of tables)
ExperimentSpec spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const ExperimentSpec& spec);

}  // namespace dagbuild
