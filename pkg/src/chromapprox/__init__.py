"""Monte Carlo estimation of chromatic polynomial coefficients.

Two unbiased samplers (broken-circuit subgraph counting and
independent-partition merging), exact small-graph oracles to validate
them against, log-space numerics for the huge magnitudes involved, and
a CLI that ties generation, estimation, and comparison together.
"""

from .exact import (
    DC_CAP,
    INTERP_CAP,
    NBC_CAP,
    PARTITION_CAP,
    PATHCOUNT_CAP,
    ExactPolynomial,
    OracleCapError,
    count_proper_colorings,
    exact_by_interpolation,
    exact_deletion_contraction,
    exact_nbc_counts,
    formula_family,
    independent_partition_counts,
    refinement_path_count,
    whitney_polynomial,
)
from .ff import (
    BlockMatrix,
    FfSample,
    PowerBasisResult,
    duplicate_count,
    duplicate_count_exact,
    falling_to_power,
    ff_estimate,
    ff_outcome_distribution,
    ff_sample,
    stirling_first_row,
)
from .graph import (
    EdgeOrdering,
    GenerationError,
    Graph,
    GraphError,
    GraphParseError,
    VertexOrdering,
    edge_order_from_vertex_order,
    gen_er,
    gen_named,
    girth,
    input_edge_order,
    is_connected,
    load_graph_text,
    mix_seed,
    parse_dimacs,
    parse_edge_list,
    peo_vertex_order,
    random_edge_order,
    write_edge_list,
)
from .nbc import (
    BcSample,
    DisconnectedGraphError,
    DisjointSet,
    ForestState,
    a_to_b,
    bc_estimate,
    bc_outcome_distribution,
    bc_sample,
    bc_sample_improved,
    is_nbc_admissible,
    resolve_edge_ordering,
    signed_coefficients,
)
from .stats import (
    EstimateReport,
    LogNumber,
    SampleAccumulator,
    arc_error,
    convergence_check,
    horner_log,
    log_add,
    log_sub,
    merge,
    rel_eval_error,
    welford_push,
)

__version__ = "0.1.0"

__all__ = [
    "BcSample",
    "BlockMatrix",
    "DC_CAP",
    "DisconnectedGraphError",
    "DisjointSet",
    "EdgeOrdering",
    "EstimateReport",
    "ExactPolynomial",
    "FfSample",
    "ForestState",
    "GenerationError",
    "Graph",
    "GraphError",
    "GraphParseError",
    "INTERP_CAP",
    "LogNumber",
    "NBC_CAP",
    "OracleCapError",
    "PARTITION_CAP",
    "PATHCOUNT_CAP",
    "PowerBasisResult",
    "SampleAccumulator",
    "VertexOrdering",
    "a_to_b",
    "arc_error",
    "bc_estimate",
    "bc_outcome_distribution",
    "bc_sample",
    "bc_sample_improved",
    "convergence_check",
    "count_proper_colorings",
    "duplicate_count",
    "duplicate_count_exact",
    "edge_order_from_vertex_order",
    "exact_by_interpolation",
    "exact_deletion_contraction",
    "exact_nbc_counts",
    "falling_to_power",
    "ff_estimate",
    "ff_outcome_distribution",
    "ff_sample",
    "formula_family",
    "gen_er",
    "gen_named",
    "girth",
    "horner_log",
    "independent_partition_counts",
    "input_edge_order",
    "is_connected",
    "is_nbc_admissible",
    "load_graph_text",
    "log_add",
    "log_sub",
    "merge",
    "mix_seed",
    "parse_dimacs",
    "parse_edge_list",
    "peo_vertex_order",
    "random_edge_order",
    "refinement_path_count",
    "rel_eval_error",
    "resolve_edge_ordering",
    "signed_coefficients",
    "stirling_first_row",
    "welford_push",
    "whitney_polynomial",
    "write_edge_list",
]
