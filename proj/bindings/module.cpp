#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <vector>

#include "dagbuild/build.hpp"
#include "dagbuild/experiment.hpp"
#include "dagbuild/io.hpp"
#include "dagbuild/metrics.hpp"
#include "dagbuild/rng.hpp"

namespace py = pybind11;
using namespace dagbuild;

namespace {

// raw generator stream, exposed so python tests can cross-check against
// numpy.random.Philox
std::vector<std::uint64_t> rng_u64_stream(std::uint64_t seed, int count) {
  Philox4x64 gen(seed);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(count));
  for (auto& value : out) value = gen.next_u64();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bottom-up DAG recovery from precision matrices";

  py::register_exception<Error>(m, "DagbuildError", PyExc_ValueError);

  py::class_<WeightedDag>(m, "WeightedDag")
      .def(py::init<int>(), py::arg("n"))
      .def(py::init<int, Eigen::MatrixXd>(), py::arg("n"), py::arg("weights"))
      .def(py::init([](const Eigen::MatrixXd& w) {
             return WeightedDag(static_cast<int>(w.rows()), w);
           }),
           py::arg("weights"))
      .def_readonly("n", &WeightedDag::n)
      .def_readwrite("weights", &WeightedDag::weights)
      .def_readonly("generation_order", &WeightedDag::generation_order)
      .def("edge_count", &WeightedDag::edge_count)
      .def("__repr__", [](const WeightedDag& dag) {
        return "WeightedDag(n=" + std::to_string(dag.n) + ", edges=" +
               std::to_string(dag.edge_count()) + ")";
      });

  py::class_<UndirectedGraph>(m, "UndirectedGraph")
      .def_readonly("n", &UndirectedGraph::n)
      .def_readonly("adjacency", &UndirectedGraph::adjacency)
      .def("edge_count", &UndirectedGraph::edge_count)
      .def("has_edge", &UndirectedGraph::has_edge);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<double>(), py::arg("sigma2"))
      .def_readonly("sigma2", &NoiseModel::sigma2);
  py::implicitly_convertible<double, NoiseModel>();

  py::class_<PrecisionMatrix>(m, "PrecisionMatrix")
      .def(py::init<Eigen::MatrixXd>(), py::arg("values"))
      .def_readonly("n", &PrecisionMatrix::n)
      .def_readonly("values", &PrecisionMatrix::values)
      .def("active_nodes", &PrecisionMatrix::active_nodes)
      .def("active_block", &PrecisionMatrix::active_block)
      .def("is_symmetric", &PrecisionMatrix::is_symmetric,
           py::arg("rel_tol") = 1e-12);

  py::class_<DataMatrix>(m, "DataMatrix")
      .def(py::init<Eigen::MatrixXd>(), py::arg("values"))
      .def_readonly("n", &DataMatrix::n)
      .def_readonly("m", &DataMatrix::m)
      .def_readonly("values", &DataMatrix::values);

  py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
      .def_readonly("n", &CovarianceMatrix::n)
      .def_readonly("values", &CovarianceMatrix::values);

  // graph operations
  m.def("validate", &validate, py::arg("dag"));
  m.def("topological_order", &topological_order, py::arg("dag"));
  m.def("children", &children, py::arg("dag"), py::arg("i"));
  m.def("parents", &parents, py::arg("dag"), py::arg("i"));
  m.def("leaves", &leaves, py::arg("dag"));
  m.def("moralize", &moralize, py::arg("dag"));
  m.def("sample_er_dag", &sample_er_dag, py::arg("n"),
        py::arg("expected_degree"), py::arg("weight_lo"), py::arg("weight_hi"),
        py::arg("seed"));
  m.def("chain_dag", &chain_dag, py::arg("n"), py::arg("k"));

  // ensemble quantities and sampling
  m.def("ensemble_covariance", &ensemble_covariance, py::arg("dag"),
        py::arg("noise"));
  m.def("ensemble_precision", &ensemble_precision, py::arg("dag"),
        py::arg("noise"));
  m.def("theta_entry", &theta_entry, py::arg("dag"), py::arg("noise"),
        py::arg("i"), py::arg("j"));
  m.def("resolution_gap", &resolution_gap, py::arg("dag"), py::arg("noise"));
  m.def("sample_data", &sample_data, py::arg("dag"), py::arg("noise"),
        py::arg("m"), py::arg("seed"));
  m.def("condition_number", &condition_number, py::arg("theta"));

  // estimation
  py::enum_<EstimatorKind>(m, "EstimatorKind")
      .value("Oracle", EstimatorKind::Oracle)
      .value("SampleInverse", EstimatorKind::SampleInverse)
      .value("RidgeInverse", EstimatorKind::RidgeInverse);

  py::class_<EstimatorSpec>(m, "EstimatorSpec")
      .def(py::init<>())
      .def_readwrite("kind", &EstimatorSpec::kind)
      .def_readwrite("ridge_lambda", &EstimatorSpec::ridge_lambda)
      .def_readwrite("center", &EstimatorSpec::center)
      .def_static("sample_inverse", &EstimatorSpec::sample_inverse)
      .def_static("ridge", &EstimatorSpec::ridge,
                  py::arg("ridge_lambda") = std::nullopt)
      .def_static("oracle", &EstimatorSpec::oracle, py::arg("dag"),
                  py::arg("noise"));

  py::class_<RestrictedData>(m, "RestrictedData")
      .def_readonly("data", &RestrictedData::data)
      .def_readonly("global_ids", &RestrictedData::global_ids);

  m.def("sample_covariance", &sample_covariance, py::arg("x"),
        py::arg("center") = false);
  m.def("restrict", &restrict, py::arg("x"), py::arg("nodes"));
  m.def("estimate_precision",
        py::overload_cast<const DataMatrix&, const EstimatorSpec&>(
            &estimate_precision),
        py::arg("x"), py::arg("spec"));
  m.def("estimate_precision",
        py::overload_cast<const RestrictedData&, const EstimatorSpec&>(
            &estimate_precision),
        py::arg("x"), py::arg("spec"));

  // build loop
  py::class_<BuildConfig>(m, "BuildConfig")
      .def(py::init<>())
      .def_readwrite("sigma2", &BuildConfig::sigma2)
      .def_readwrite("eps_leaf", &BuildConfig::eps_leaf)
      .def_readwrite("eps_edge", &BuildConfig::eps_edge)
      .def_readwrite("rho", &BuildConfig::rho)
      .def_readwrite("estimator", &BuildConfig::estimator)
      .def_readwrite("max_parent_check", &BuildConfig::max_parent_check)
      .def("effective_eps_leaf", &BuildConfig::effective_eps_leaf);

  py::class_<StepDiagnostic>(m, "StepDiagnostic")
      .def_readonly("node", &StepDiagnostic::node)
      .def_readonly("diagonal", &StepDiagnostic::diagonal)
      .def_readonly("parent_count", &StepDiagnostic::parent_count)
      .def_readonly("suspect", &StepDiagnostic::suspect);

  py::class_<BuildResult>(m, "BuildResult")
      .def_readonly("a_hat", &BuildResult::a_hat)
      .def_readonly("elimination_order", &BuildResult::elimination_order)
      .def_readonly("refresh_count", &BuildResult::refresh_count)
      .def_readonly("incomplete", &BuildResult::incomplete)
      .def_readonly("steps", &BuildResult::steps)
      .def_readonly("suspect_leaf_count", &BuildResult::suspect_leaf_count);

  m.def("refresh_checkpoints", &refresh_checkpoints, py::arg("n"),
        py::arg("rho"));
  m.def("run_build",
        py::overload_cast<const PrecisionMatrix&, const BuildConfig&>(
            &run_build),
        py::arg("theta0"), py::arg("config"));
  m.def("run_build",
        py::overload_cast<const DataMatrix&, const BuildConfig&>(&run_build),
        py::arg("x"), py::arg("config"));
  m.def("run_build",
        py::overload_cast<const PrecisionMatrix&, const DataMatrix&,
                          const BuildConfig&>(&run_build),
        py::arg("theta0"), py::arg("x"), py::arg("config"));

  // metrics
  py::class_<MetricReport>(m, "MetricReport")
      .def_readonly("shd", &MetricReport::shd)
      .def_readonly("fdr", &MetricReport::fdr)
      .def_readonly("tpr", &MetricReport::tpr)
      .def_readonly("nmse", &MetricReport::nmse)
      .def_readonly("tp", &MetricReport::tp)
      .def_readonly("fp", &MetricReport::fp)
      .def_readonly("fn", &MetricReport::fn)
      .def_readonly("reversed", &MetricReport::reversed);

  m.def("shd", &shd, py::arg("a_hat"), py::arg("a_true"));
  m.def("fdr_tpr", &fdr_tpr, py::arg("a_hat"), py::arg("a_true"));
  m.def("nmse", &nmse, py::arg("a_hat"), py::arg("a_true"));
  m.def("evaluate", &evaluate, py::arg("a_hat"), py::arg("a_true"));

  // io
  m.def("write_edge_list", &write_edge_list, py::arg("dag"), py::arg("path"));
  m.def("read_edge_list", &read_edge_list, py::arg("path"));
  m.def("edge_list_to_string", &edge_list_to_string, py::arg("dag"));
  m.def("edge_list_from_string", &edge_list_from_string, py::arg("text"));
  m.def("write_matrix", &write_matrix, py::arg("matrix"), py::arg("path"));
  m.def("read_matrix", &read_matrix, py::arg("path"));

  m.def("rng_u64_stream", &rng_u64_stream, py::arg("seed"), py::arg("count"));

  m.attr("__version__") = "0.1.0";
}
