#include "dagbuild/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dagbuild/io.hpp"

namespace dagbuild {

void ExperimentSpec::check() const {
  if (n < 2) throw ConfigError("experiment: n must be >= 2");
  if (!(expected_degree > 0.0) ||
      expected_degree > static_cast<double>(n - 1))
    throw ConfigError("experiment: d must lie in (0, n-1]");
  if (m_list.empty()) throw ConfigError("experiment: m_list must be nonempty");
  for (int m : m_list)
    if (m < 2) throw ConfigError("experiment: every m must be >= 2");
  if (!(weight_lo > 0.0) || !(weight_lo < weight_hi))
    throw ConfigError("experiment: need 0 < weight_lo < weight_hi");
  if (!(sigma2 > 0.0)) throw ConfigError("experiment: sigma2 must be positive");
  if (trials < 1) throw ConfigError("experiment: trials must be >= 1");
  if (workers < 1) throw ConfigError("experiment: workers must be >= 1");
  if (methods.empty()) throw ConfigError("experiment: no methods configured");
  std::set<std::string> labels;
  for (const MethodSpec& method : methods) {
    if (method.label.empty()) throw ConfigError("experiment: empty method label");
    if (!labels.insert(method.label).second)
      throw ConfigError("experiment: duplicate method label '" + method.label +
                        "'");
    method.config.check();
  }
}

namespace {

TrialRecord run_one(const ExperimentSpec& spec, const MethodSpec& method,
                    const WeightedDag& truth, const DataMatrix& data, int m,
                    int trial, std::uint64_t seed) {
  TrialRecord record;
  record.method = method.label;
  record.m = m;
  record.trial = trial;
  record.seed = seed;
  try {
    BuildConfig config = method.config;
    config.sigma2 = spec.sigma2;
    if (config.estimator.kind == EstimatorKind::Oracle)
      config.estimator = EstimatorSpec::oracle(truth, NoiseModel(spec.sigma2));

    const auto start = std::chrono::steady_clock::now();
    BuildResult result;
    if (config.estimator.kind == EstimatorKind::Oracle) {
      // the oracle's "estimation phase" is the exact ensemble precision
      const PrecisionMatrix theta0 =
          ensemble_precision(truth, NoiseModel(spec.sigma2));
      result = run_build(theta0, data, config);
    } else {
      result = run_build(data, config);
    }
    const auto stop = std::chrono::steady_clock::now();
    record.runtime_s =
        std::chrono::duration<double>(stop - start).count();
    record.refresh_count = result.refresh_count;
    record.incomplete = result.incomplete;
    record.metrics = evaluate(result.a_hat, truth.weights);
  } catch (const std::exception& error) {
    record.failure = error.what();
  }
  return record;
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  spec.check();
  const int n_methods = static_cast<int>(spec.methods.size());
  const int n_ms = static_cast<int>(spec.m_list.size());
  const int n_tasks = n_ms * spec.trials;

  // records indexed [method][m][trial] so the output order is stable
  std::vector<TrialRecord> records(
      static_cast<std::size_t>(n_methods * n_tasks));
  const auto slot = [&](int method, int m_idx, int trial) {
    return static_cast<std::size_t>((method * n_ms + m_idx) * spec.trials +
                                    trial);
  };

  std::atomic<int> next_task{0};
  const auto worker = [&] {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      const int m_idx = task / spec.trials;
      const int trial = task % spec.trials;
      const int m = spec.m_list[static_cast<std::size_t>(m_idx)];
      const std::uint64_t seed =
          spec.base_seed + static_cast<std::uint64_t>(trial);
      try {
        const WeightedDag truth = sample_er_dag(
            spec.n, spec.expected_degree, spec.weight_lo, spec.weight_hi, seed);
        const DataMatrix data =
            sample_data(truth, NoiseModel(spec.sigma2), m, seed);
        for (int k = 0; k < n_methods; ++k) {
          records[slot(k, m_idx, trial)] =
              run_one(spec, spec.methods[static_cast<std::size_t>(k)], truth,
                      data, m, trial, seed);
        }
      } catch (const std::exception& error) {
        // generation failed: every method of this task inherits the failure
        for (int k = 0; k < n_methods; ++k) {
          TrialRecord& record = records[slot(k, m_idx, trial)];
          record.method = spec.methods[static_cast<std::size_t>(k)].label;
          record.m = m;
          record.trial = trial;
          record.seed = seed;
          record.failure = error.what();
        }
      }
    }
  };

  const int n_workers = std::min(spec.workers, n_tasks);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return records;
}

namespace {

Stats compute_stats(std::vector<double> values) {
  Stats stats;
  const std::size_t count = values.size();
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(count - 1));
  }
  const auto percentile = [&](double q) {
    const double h = q * static_cast<double>(count - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= count) return values[count - 1];
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
  };
  stats.median = percentile(0.5);
  stats.p10 = percentile(0.1);
  stats.p90 = percentile(0.9);
  return stats;
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ConfigError("aggregate: no records");
  // group by (method, m) preserving first appearance
  std::vector<std::pair<std::string, int>> keys;
  for (const TrialRecord& record : records) {
    const std::pair<std::string, int> key{record.method, record.m};
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      keys.push_back(key);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : keys) {
    SummaryRow row;
    row.method = key.first;
    row.m = key.second;
    std::vector<double> shd, fdr, tpr, nmse, runtime;
    for (const TrialRecord& record : records) {
      if (record.method != key.first || record.m != key.second) continue;
      row.trials += 1;
      if (record.failed()) {
        row.failures += 1;
        continue;
      }
      shd.push_back(static_cast<double>(record.metrics.shd));
      fdr.push_back(record.metrics.fdr);
      tpr.push_back(record.metrics.tpr);
      nmse.push_back(record.metrics.nmse);
      runtime.push_back(record.runtime_s);
    }
    if (!shd.empty()) {
      row.shd = compute_stats(shd);
      row.fdr = compute_stats(fdr);
      row.tpr = compute_stats(tpr);
      row.nmse = compute_stats(nmse);
      row.runtime_s = compute_stats(runtime);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "method,m,trial,seed,shd,fdr,tpr,nmse,runtime_s,refresh_count,"
         "incomplete,failure\n";
  for (const TrialRecord& record : records) {
    out << csv_escape(record.method) << ',' << record.m << ',' << record.trial
        << ',' << record.seed << ',';
    if (record.failed()) {
      out << ",,,,";  // blank metric cells
    } else {
      out << record.metrics.shd << ',' << format_double(record.metrics.fdr)
          << ',' << format_double(record.metrics.tpr) << ','
          << format_double(record.metrics.nmse) << ','
          << format_double(record.runtime_s);
    }
    out << ',' << record.refresh_count << ',' << (record.incomplete ? 1 : 0)
        << ',' << csv_escape(record.failure) << '\n';
  }
  return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "method,m,trials,failures";
  for (const char* metric : {"shd", "fdr", "tpr", "nmse", "runtime_s"})
    out << ',' << metric << "_mean," << metric << "_std," << metric
        << "_median," << metric << "_p10," << metric << "_p90";
  out << '\n';
  for (const SummaryRow& row : rows) {
    out << csv_escape(row.method) << ',' << row.m << ',' << row.trials << ','
        << row.failures;
    for (const auto* stats :
         {&row.shd, &row.fdr, &row.tpr, &row.nmse, &row.runtime_s}) {
      if (stats->has_value()) {
        const Stats& s = **stats;
        out << ',' << format_double(s.mean) << ',' << format_double(s.stddev)
            << ',' << format_double(s.median) << ',' << format_double(s.p10)
            << ',' << format_double(s.p90);
      } else {
        out << ",,,,,";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string csv_without_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    // split on commas outside quotes, keeping empty fields
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == ',' && !quoted)
        fields.emplace_back();
      else
        fields.back() += ch;
    }
    bool first = true;
    for (std::size_t index = 0; index < fields.size(); ++index) {
      if (index == 8) continue;  // runtime_s
      if (!first) out << ',';
      out << fields[index];
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

using nlohmann::json;

EstimatorSpec estimator_from_json(const json& method) {
  const std::string kind = method.value("estimator", "sample_inverse");
  EstimatorSpec spec;
  if (kind == "oracle") {
    spec.kind = EstimatorKind::Oracle;  // source bound per trial
  } else if (kind == "sample_inverse") {
    spec.kind = EstimatorKind::SampleInverse;
  } else if (kind == "ridge") {
    spec.kind = EstimatorKind::RidgeInverse;
  } else {
    throw ConfigError("unknown estimator '" + kind + "'");
  }
  if (method.contains("ridge_lambda"))
    spec.ridge_lambda = method.at("ridge_lambda").get<double>();
  spec.center = method.value("center", false);
  return spec;
}

}  // namespace

ExperimentSpec spec_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("config parse error: ") + error.what());
  }
  try {
    ExperimentSpec spec;
    spec.n = root.value("n", spec.n);
    spec.expected_degree = root.value("d", spec.expected_degree);
    if (root.contains("m_list"))
      spec.m_list = root.at("m_list").get<std::vector<int>>();
    spec.weight_lo = root.value("weight_lo", spec.weight_lo);
    spec.weight_hi = root.value("weight_hi", spec.weight_hi);
    spec.sigma2 = root.value("sigma2", spec.sigma2);
    spec.trials = root.value("trials", spec.trials);
    spec.base_seed = root.value("base_seed", spec.base_seed);
    spec.workers = root.value("workers", spec.workers);
    for (const json& method : root.value("methods", json::array())) {
      MethodSpec ms;
      ms.label = method.value("label", "");
      ms.config.sigma2 = spec.sigma2;
      ms.config.rho = method.value("rho", 0.0);
      if (method.contains("eps_leaf"))
        ms.config.eps_leaf = method.at("eps_leaf").get<double>();
      ms.config.eps_edge = method.value("eps_edge", ms.config.eps_edge);
      ms.config.max_parent_check =
          method.value("max_parent_check", ms.config.max_parent_check);
      ms.config.estimator = estimator_from_json(method);
      spec.methods.push_back(std::move(ms));
    }
    return spec;
  } catch (const json::exception& error) {
    throw ConfigError(std::string("config error: ") + error.what());
  }
}

std::string spec_to_json_text(const ExperimentSpec& spec) {
  json root;
  root["n"] = spec.n;
  root["d"] = spec.expected_degree;
  root["m_list"] = spec.m_list;
  root["weight_lo"] = spec.weight_lo;
  root["weight_hi"] = spec.weight_hi;
  root["sigma2"] = spec.sigma2;
  root["trials"] = spec.trials;
  root["base_seed"] = spec.base_seed;
  root["workers"] = spec.workers;
  json methods = json::array();
  for (const MethodSpec& method : spec.methods) {
    json entry;
    entry["label"] = method.label;
    entry["rho"] = method.config.rho;
    if (method.config.eps_leaf) entry["eps_leaf"] = *method.config.eps_leaf;
    entry["eps_edge"] = method.config.eps_edge;
    if (method.config.max_parent_check) entry["max_parent_check"] = true;
    switch (method.config.estimator.kind) {
      case EstimatorKind::Oracle:
        entry["estimator"] = "oracle";
        break;
      case EstimatorKind::SampleInverse:
        entry["estimator"] = "sample_inverse";
        break;
      case EstimatorKind::RidgeInverse:
        entry["estimator"] = "ridge";
        break;
    }
    if (method.config.estimator.ridge_lambda)
      entry["ridge_lambda"] = *method.config.estimator.ridge_lambda;
    if (method.config.estimator.center) entry["center"] = true;
    methods.push_back(std::move(entry));
  }
  root["methods"] = std::move(methods);
  return root.dump(2) + "\n";
}

}  // namespace dagbuild
