"""Bottom-up DAG recovery from precision matrices of linear Gaussian SEMs."""

from dagbuild._core import (
    BuildConfig,
    BuildResult,
    CovarianceMatrix,
    DagbuildError,
    DataMatrix,
    EstimatorKind,
    EstimatorSpec,
    MetricReport,
    NoiseModel,
    PrecisionMatrix,
    RestrictedData,
    StepDiagnostic,
    UndirectedGraph,
    WeightedDag,
    chain_dag,
    children,
    condition_number,
    edge_list_from_string,
    edge_list_to_string,
    ensemble_covariance,
    ensemble_precision,
    estimate_precision,
    evaluate,
    fdr_tpr,
    leaves,
    moralize,
    nmse,
    parents,
    read_edge_list,
    read_matrix,
    refresh_checkpoints,
    resolution_gap,
    restrict,
    rng_u64_stream,
    run_build,
    sample_covariance,
    sample_data,
    sample_er_dag,
    shd,
    theta_entry,
    topological_order,
    validate,
    write_edge_list,
    write_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BuildConfig",
    "BuildResult",
    "CovarianceMatrix",
    "DagbuildError",
    "DataMatrix",
    "EstimatorKind",
    "EstimatorSpec",
    "MetricReport",
    "NoiseModel",
    "PrecisionMatrix",
    "RestrictedData",
    "StepDiagnostic",
    "UndirectedGraph",
    "WeightedDag",
    "chain_dag",
    "children",
    "condition_number",
    "edge_list_from_string",
    "edge_list_to_string",
    "ensemble_covariance",
    "ensemble_precision",
    "estimate_precision",
    "evaluate",
    "fdr_tpr",
    "leaves",
    "moralize",
    "nmse",
    "parents",
    "read_edge_list",
    "read_matrix",
    "refresh_checkpoints",
    "resolution_gap",
    "restrict",
    "rng_u64_stream",
    "run_build",
    "sample_covariance",
    "sample_data",
    "sample_er_dag",
    "shd",
    "theta_entry",
    "topological_order",
    "validate",
    "write_edge_list",
    "write_matrix",
]
