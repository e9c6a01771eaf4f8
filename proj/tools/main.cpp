#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dagbuild/build.hpp"
#include "dagbuild/experiment.hpp"
#include "dagbuild/io.hpp"
#include "dagbuild/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitAllTrialsFailed = 2;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dagbuild::IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dagbuild::IoError("cannot write " + path);
  out << content;
}

dagbuild::EstimatorSpec make_estimator(const std::string& name,
                                       std::optional<double> ridge_lambda) {
  dagbuild::EstimatorSpec spec;
  if (name == "sample_inverse") {
    spec.kind = dagbuild::EstimatorKind::SampleInverse;
  } else if (name == "ridge") {
    spec.kind = dagbuild::EstimatorKind::RidgeInverse;
  } else {
    throw dagbuild::ConfigError("unknown estimator '" + name +
                                "' (use sample_inverse or ridge)");
  }
  spec.ridge_lambda = ridge_lambda;
  return spec;
}

struct RunOptions {
  std::string config_path;
  std::string out_dir = "results";
  std::optional<int> n;
  std::optional<double> d;
  std::optional<std::vector<int>> m_list;
  std::optional<double> weight_lo, weight_hi, sigma2;
  std::optional<int> trials, workers;
  std::optional<std::uint64_t> base_seed;
};

int cmd_run(const RunOptions& opt) {
  dagbuild::ExperimentSpec spec =
      dagbuild::spec_from_json_text(read_text_file(opt.config_path));
  if (opt.n) spec.n = *opt.n;
  if (opt.d) spec.expected_degree = *opt.d;
  if (opt.m_list) spec.m_list = *opt.m_list;
  if (opt.weight_lo) spec.weight_lo = *opt.weight_lo;
  if (opt.weight_hi) spec.weight_hi = *opt.weight_hi;
  if (opt.sigma2) {
    spec.sigma2 = *opt.sigma2;
    for (auto& method : spec.methods) method.config.sigma2 = *opt.sigma2;
  }
  if (opt.trials) spec.trials = *opt.trials;
  if (opt.base_seed) spec.base_seed = *opt.base_seed;
  if (opt.workers) spec.workers = *opt.workers;
  spec.check();

  std::filesystem::create_directories(opt.out_dir);
  // echo the effective configuration next to the results
  write_text_file(opt.out_dir + "/config_resolved.json",
                  dagbuild::spec_to_json_text(spec));

  const std::vector<dagbuild::TrialRecord> records =
      dagbuild::run_experiment(spec);
  write_text_file(opt.out_dir + "/results.csv",
                  dagbuild::records_to_csv(records));
  write_text_file(opt.out_dir + "/summary.csv",
                  dagbuild::summary_to_csv(dagbuild::aggregate(records)));

  int failures = 0;
  for (const auto& record : records) failures += record.failed();
  std::cout << "wrote " << records.size() << " trial records to " << opt.out_dir
            << "/results.csv (" << failures << " failed)\n";
  if (failures == static_cast<int>(records.size())) return kExitAllTrialsFailed;
  return kExitOk;
}

struct BuildOptions {
  std::string input;
  std::string input_kind = "data";
  std::string output;
  double sigma2 = 1.0;
  std::optional<double> eps_leaf;
  double eps_edge = 0.25;
  double rho = 0.0;
  std::string estimator = "sample_inverse";
  std::optional<double> ridge_lambda;
  bool max_parent_check = false;
  std::uint64_t seed = 0;  // reserved for estimators that may need randomness
};

int cmd_build(const BuildOptions& opt) {
  dagbuild::BuildConfig config;
  config.sigma2 = opt.sigma2;
  config.eps_leaf = opt.eps_leaf;
  config.eps_edge = opt.eps_edge;
  config.rho = opt.rho;
  config.estimator = make_estimator(opt.estimator, opt.ridge_lambda);
  config.max_parent_check = opt.max_parent_check;

  dagbuild::BuildResult result;
  const Eigen::MatrixXd input = dagbuild::read_matrix(opt.input);
  if (opt.input_kind == "precision") {
    dagbuild::PrecisionMatrix theta(input);
    if (!theta.is_symmetric(1e-9))
      throw dagbuild::ConfigError("input precision matrix is not symmetric");
    result = dagbuild::run_build(theta, config);
  } else if (opt.input_kind == "data") {
    result = dagbuild::run_build(dagbuild::DataMatrix(input), config);
  } else {
    throw dagbuild::ConfigError("--input-kind must be data or precision");
  }

  dagbuild::WeightedDag estimate(static_cast<int>(result.a_hat.rows()),
                                 result.a_hat);
  dagbuild::write_edge_list(estimate, opt.output);
  std::cout << "nodes: " << estimate.n << "\nedges: " << estimate.edge_count()
            << "\nrefreshes: " << result.refresh_count
            << "\nincomplete: " << (result.incomplete ? "yes" : "no");
  if (opt.max_parent_check)
    std::cout << "\nsuspect leaves: " << result.suspect_leaf_count;
  std::cout << "\nwrote " << opt.output << "\n";
  return kExitOk;
}

struct GenOptions {
  int n = 20;
  double d = 2.0;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
  double sigma2 = 1.0;
  int m = 1000;
  std::uint64_t seed = 1;
  std::string graph = "er";
  double chain_k = 1.5;
  std::string out_dag;
  std::string out_data;
  std::string out_precision;
};

int cmd_gen(const GenOptions& opt) {
  dagbuild::WeightedDag dag;
  if (opt.graph == "er") {
    dag = dagbuild::sample_er_dag(opt.n, opt.d, opt.weight_lo, opt.weight_hi,
                                  opt.seed);
  } else if (opt.graph == "chain") {
    dag = dagbuild::chain_dag(opt.n, opt.chain_k);
  } else {
    throw dagbuild::ConfigError("--graph must be er or chain");
  }
  const dagbuild::NoiseModel noise(opt.sigma2);
  if (!opt.out_dag.empty()) {
    dagbuild::write_edge_list(dag, opt.out_dag);
    std::cout << "wrote " << opt.out_dag << " (" << dag.edge_count()
              << " edges)\n";
  }
  if (!opt.out_data.empty()) {
    const dagbuild::DataMatrix data =
        dagbuild::sample_data(dag, noise, opt.m, opt.seed);
    dagbuild::write_matrix(data.values, opt.out_data);
    std::cout << "wrote " << opt.out_data << " (" << data.n << " x " << data.m
              << ")\n";
  }
  if (!opt.out_precision.empty()) {
    const dagbuild::PrecisionMatrix theta =
        dagbuild::ensemble_precision(dag, noise);
    dagbuild::write_matrix(theta.values, opt.out_precision);
    std::cout << "wrote " << opt.out_precision << "\n";
  }
  return kExitOk;
}

struct MetricsOptions {
  std::string estimate;
  std::string truth;
};

int cmd_metrics(const MetricsOptions& opt) {
  const dagbuild::WeightedDag estimate = dagbuild::read_edge_list(opt.estimate);
  const dagbuild::WeightedDag truth = dagbuild::read_edge_list(opt.truth);
  const dagbuild::MetricReport report =
      dagbuild::evaluate(estimate.weights, truth.weights);
  std::cout << "shd,fdr,tpr,nmse,tp,fp,fn,reversed\n"
            << report.shd << ',' << dagbuild::format_double(report.fdr) << ','
            << dagbuild::format_double(report.tpr) << ','
            << dagbuild::format_double(report.nmse) << ',' << report.tp << ','
            << report.fp << ',' << report.fn << ',' << report.reversed << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bottom-up DAG recovery from precision matrices"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "execute an experiment spec file");
  run->add_option("config", run_opt.config_path, "experiment JSON file")
      ->required();
  run->add_option("--out", run_opt.out_dir, "output directory");
  run->add_option("--n", run_opt.n, "override node count");
  run->add_option("--d", run_opt.d, "override expected degree");
  run->add_option("--m-list", run_opt.m_list, "override sample sizes");
  run->add_option("--weight-lo", run_opt.weight_lo, "override weight_lo");
  run->add_option("--weight-hi", run_opt.weight_hi, "override weight_hi");
  run->add_option("--sigma2", run_opt.sigma2, "override noise variance");
  run->add_option("--trials", run_opt.trials, "override trial count");
  run->add_option("--base-seed", run_opt.base_seed, "override base seed");
  run->add_option("--workers", run_opt.workers, "override worker count");

  BuildOptions build_opt;
  CLI::App* build =
      app.add_subcommand("build", "recover a DAG from one data/precision file");
  build->add_option("--input", build_opt.input, "input matrix (.csv or binary)")
      ->required();
  build->add_option("--input-kind", build_opt.input_kind,
                    "data (default) or precision");
  build->add_option("--output", build_opt.output, "edge-list output path")
      ->required();
  build->add_option("--sigma2", build_opt.sigma2, "noise variance");
  build->add_option("--eps-leaf", build_opt.eps_leaf,
                    "diagonal floor (default 0.5/sigma2)");
  build->add_option("--eps-edge", build_opt.eps_edge, "edge threshold");
  build->add_option("--rho", build_opt.rho, "refresh rate in [0,1]");
  build->add_option("--estimator", build_opt.estimator,
                    "sample_inverse or ridge");
  build->add_option("--ridge-lambda", build_opt.ridge_lambda,
                    "ridge strength (default scale-aware)");
  build->add_flag("--max-parent-check", build_opt.max_parent_check,
                  "flag steps whose diagonal strays far from 1/sigma2");
  build->add_option("--seed", build_opt.seed, "reserved randomness seed");

  GenOptions gen_opt;
  CLI::App* gen = app.add_subcommand("gen", "emit a synthetic DAG and dataset");
  gen->add_option("--n", gen_opt.n, "node count");
  gen->add_option("--d", gen_opt.d, "expected degree (er graphs)");
  gen->add_option("--weight-lo", gen_opt.weight_lo, "minimum |weight|");
  gen->add_option("--weight-hi", gen_opt.weight_hi, "maximum |weight|");
  gen->add_option("--sigma2", gen_opt.sigma2, "noise variance");
  gen->add_option("--m", gen_opt.m, "sample count");
  gen->add_option("--seed", gen_opt.seed, "seed");
  gen->add_option("--graph", gen_opt.graph, "er or chain");
  gen->add_option("--chain-k", gen_opt.chain_k, "chain edge weight");
  gen->add_option("--out-dag", gen_opt.out_dag, "edge-list output");
  gen->add_option("--out-data", gen_opt.out_data, "data matrix output");
  gen->add_option("--out-precision", gen_opt.out_precision,
                  "ensemble precision output");

  MetricsOptions metrics_opt;
  CLI::App* metrics =
      app.add_subcommand("metrics", "compare two edge-list files");
  metrics->add_option("--estimate", metrics_opt.estimate, "estimated edge list")
      ->required();
  metrics->add_option("--truth", metrics_opt.truth, "ground-truth edge list")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (build->parsed()) return cmd_build(build_opt);
    if (gen->parsed()) return cmd_gen(gen_opt);
    if (metrics->parsed()) return cmd_metrics(metrics_opt);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
