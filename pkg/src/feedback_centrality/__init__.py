"""Feedback centralities on weighted directed graphs.

Four measures that split a node's score into an intrinsic part (its node
weight) and a part fed back along incoming edges: two spectral ones
(eigenvector centrality and its normalized stationary variant) and two
damped ones (Katz and PageRank, each with a decay parameter).  The package
evaluates them exactly (rational mode) or numerically (float mode), checks
the behavioural axioms that tell them apart, simulates the underlying walk
processes, and carries the constructions that relate a graph to an
equivalent constant-weight cycle graph.
"""

from .axioms import (
    ALL_AXIOMS,
    AXIOM_TOL,
    AxiomId,
    AxiomInstance,
    AxiomTag,
    AxiomVerdict,
    CellResult,
    CellStatus,
    EXPECTED_MATRIX,
    Family,
    GeneratorSpec,
    MATRIX_MEASURES,
    MatrixReport,
    NCVariant,
    PositivityReport,
    check_axiom,
    check_positivity_and_source,
    default_corpus,
    generate,
    is_constant_weight_cycle,
    satisfaction_matrix,
    shrink_instance,
)
from .errors import (
    ConvergenceError,
    DomainError,
    FeedbackCentralityError,
    GraphFormatError,
    PreconditionError,
    SingularMatrixError,
)
from .graph import (
    ClassTag,
    ClassVerdict,
    Graph,
    GraphClass,
    Mode,
    Weight,
    adjacency_matrix,
    classify,
    delete_edge,
    format_weight,
    graph_sum,
    is_strongly_connected,
    opposite_graph,
    out_regularity,
    parse_graph,
    parse_weight,
    predecessors,
    principal_eigenvalue,
    semi_out_regularity,
    serialize_graph,
    strongly_connected_components,
    successors,
    transition_matrix,
)
from .measures import (
    CentralityVector,
    Measure,
    MeasureKind,
    eigenvector_centrality,
    katz_centrality,
    katz_prestige,
    pagerank,
    recursion_residual,
    spectral_data,
)
from .transforms import (
    CycleSynthesis,
    ImpactMultigraph,
    ProfitSpec,
    build_impact_multigraph,
    combine_groups,
    compute_impacts,
    ec_regularize,
    edge_compensation,
    edge_multiplication,
    out_degree_normalize,
    profit_decomposition,
    profit_graph,
    profit_value,
    proportional_combine,
    recombine,
    synthesize_cycle_graph,
)
from .walks import (
    ProcessKind,
    ProcessState,
    RecursionCheck,
    SeriesAccumulator,
    geometric_tail_bound,
    initial_state,
    step,
    sum_series,
    total_per_step,
    verify_recursion,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_AXIOMS",
    "AXIOM_TOL",
    "AxiomId",
    "AxiomInstance",
    "AxiomTag",
    "AxiomVerdict",
    "CellResult",
    "CellStatus",
    "CentralityVector",
    "ClassTag",
    "ClassVerdict",
    "ConvergenceError",
    "CycleSynthesis",
    "DomainError",
    "EXPECTED_MATRIX",
    "Family",
    "FeedbackCentralityError",
    "GeneratorSpec",
    "Graph",
    "GraphClass",
    "GraphFormatError",
    "ImpactMultigraph",
    "MATRIX_MEASURES",
    "MatrixReport",
    "Measure",
    "MeasureKind",
    "Mode",
    "NCVariant",
    "PositivityReport",
    "PreconditionError",
    "ProcessKind",
    "ProcessState",
    "ProfitSpec",
    "RecursionCheck",
    "SeriesAccumulator",
    "SingularMatrixError",
    "Weight",
    "adjacency_matrix",
    "build_impact_multigraph",
    "check_axiom",
    "check_positivity_and_source",
    "classify",
    "combine_groups",
    "compute_impacts",
    "default_corpus",
    "delete_edge",
    "ec_regularize",
    "edge_compensation",
    "edge_multiplication",
    "eigenvector_centrality",
    "format_weight",
    "generate",
    "geometric_tail_bound",
    "graph_sum",
    "initial_state",
    "is_constant_weight_cycle",
    "is_strongly_connected",
    "katz_centrality",
    "katz_prestige",
    "opposite_graph",
    "out_degree_normalize",
    "out_regularity",
    "pagerank",
    "parse_graph",
    "parse_weight",
    "predecessors",
    "principal_eigenvalue",
    "profit_decomposition",
    "profit_graph",
    "profit_value",
    "proportional_combine",
    "recombine",
    "recursion_residual",
    "satisfaction_matrix",
    "semi_out_regularity",
    "serialize_graph",
    "shrink_instance",
    "spectral_data",
    "step",
    "strongly_connected_components",
    "successors",
    "sum_series",
    "synthesize_cycle_graph",
    "total_per_step",
    "transition_matrix",
    "verify_recursion",
]
