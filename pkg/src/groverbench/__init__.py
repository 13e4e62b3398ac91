"""Statevector simulation and benchmarks for amplitude-amplification search.

Covers the standard full-register search, block-partial search (GRK),
depth-first layered search (DFGS), and bi-directional layered search
(BDGS), together with the closed-form cost predictors and a seeded
benchmark harness.
"""

from .bench import (
    AggregateRow,
    ErrorRow,
    ExperimentPlan,
    ResultTable,
    TrialRow,
    cell_seed,
    emit_scaling_series,
    emit_table,
    run_plan,
)
from .ops import (
    Algorithm,
    BlockPartition,
    OracleSpec,
    PredictedCost,
    bdgs_level_iterations,
    bdgs_terminal_iterations,
    bdgs_total_queries,
    grk_query_count,
    grover_angle,
    grover_iteration,
    optimal_iterations,
    predict_cost,
    predicted_layers,
)
from .search import (
    FoundBits,
    SearchConfig,
    SearchContext,
    SearchOutcome,
    SegmentSearchError,
    backward_segments,
    dfgs_segments,
    forward_segments,
    grk_reference_amplitudes,
    run_bdgs,
    run_dfgs,
    run_grk_partial,
    run_search,
    run_standard_grover,
    segment_partial_search,
    verify_outcome,
)
from .statevector import (
    MAX_QUBITS,
    BasisPredicate,
    ShotHistogram,
    StateVector,
    basis_state,
    extract_segment,
    invert_about_mean,
    operator_matrix,
    phase_flip,
    place_segment,
    sample,
    segment_mask,
    state_from_pairs,
    state_to_pairs,
    uniform_state,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AggregateRow",
    "BasisPredicate",
    "BlockPartition",
    "ErrorRow",
    "ExperimentPlan",
    "FoundBits",
    "MAX_QUBITS",
    "OracleSpec",
    "PredictedCost",
    "ResultTable",
    "SearchConfig",
    "SearchContext",
    "SearchOutcome",
    "SegmentSearchError",
    "ShotHistogram",
    "StateVector",
    "TrialRow",
    "backward_segments",
    "basis_state",
    "bdgs_level_iterations",
    "bdgs_terminal_iterations",
    "bdgs_total_queries",
    "cell_seed",
    "dfgs_segments",
    "emit_scaling_series",
    "emit_table",
    "extract_segment",
    "forward_segments",
    "grk_query_count",
    "grk_reference_amplitudes",
    "grover_angle",
    "grover_iteration",
    "invert_about_mean",
    "operator_matrix",
    "optimal_iterations",
    "phase_flip",
    "place_segment",
    "predict_cost",
    "predicted_layers",
    "run_bdgs",
    "run_dfgs",
    "run_grk_partial",
    "run_plan",
    "run_search",
    "run_standard_grover",
    "sample",
    "segment_mask",
    "segment_partial_search",
    "state_from_pairs",
    "state_to_pairs",
    "uniform_state",
    "verify_outcome",
]
