"""Layered drawings of abstract argumentation frameworks.

Splits the arguments of a framework into three layers around a chosen
extension (accepted, rejected, undecided), orders each layer to minimize
a weighted crossing count while keeping the rejected layer's highlighted
attack edges crossing-free, and renders the result as a structured
document or SVG.  Includes a fast heuristic, an exact branch-and-bound
solver with an integer-programming export, and a benchmark harness.
"""

from __future__ import annotations

from .af import (
    ArgumentationFramework,
    Label,
    LayerAssignment,
    ParseError,
    SemanticsError,
    compute_labeling,
    enumerate_semantics_bruteforce,
    grounded_extension,
    is_admissible,
    is_complete,
    is_conflict_free,
    is_stable,
    parse_af,
    parse_extension,
    serialize_af,
)
from .annotate import (
    AnnotationSet,
    ArgumentDisplay,
    EdgeDisplay,
    RedSelectionError,
    build_annotations,
    detect_odd_cycles,
    select_red_strategy_a,
    select_red_strategy_b,
)
from .api import ExactInfeasibleError, SolveOutcome, SolveRequest, execute, verify_report
from .bench import (
    BenchConfig,
    BenchRecord,
    adapt_instance,
    discover_instances,
    run_benchmark,
    summarize,
    to_csv,
)
from .exact import (
    IlpModel,
    SolveResult,
    SolveStatus,
    assignment_from_drawing,
    brute_force_oracle,
    build_ilp,
    drawing_from_solution,
    emit_lp,
    objective_value,
    parse_lp,
    solve_exact,
    violated_constraints,
)
from .generators import (
    layers_for,
    random_af,
    random_layered_instance,
    rec_neutral_family,
    rec_penalty_family,
)
from .heuristic import (
    NonConflictFreeError,
    PipelineConfig,
    initial_orders,
    optimize_drawing,
    run_pipeline,
)
from .layout import (
    CrossingReport,
    EdgePartition,
    LayeredDrawing,
    arc_edges_cross,
    count_crossings,
    partition_edges,
    proper_edges_cross,
    satisfies_rec,
    validate_drawing,
    weighted_objective_weight,
)
from .render import (
    DrawingDocument,
    RenderConfig,
    Scene,
    build_document,
    document_to_dict,
    from_json,
    layout_geometry,
    load_render_config,
    to_json,
    to_svg,
    validate_document,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationSet",
    "ArgumentDisplay",
    "ArgumentationFramework",
    "BenchConfig",
    "BenchRecord",
    "CrossingReport",
    "DrawingDocument",
    "EdgeDisplay",
    "EdgePartition",
    "ExactInfeasibleError",
    "IlpModel",
    "Label",
    "LayerAssignment",
    "LayeredDrawing",
    "NonConflictFreeError",
    "ParseError",
    "PipelineConfig",
    "RedSelectionError",
    "RenderConfig",
    "Scene",
    "SemanticsError",
    "SolveOutcome",
    "SolveRequest",
    "SolveResult",
    "SolveStatus",
    "adapt_instance",
    "arc_edges_cross",
    "assignment_from_drawing",
    "brute_force_oracle",
    "build_annotations",
    "build_document",
    "build_ilp",
    "compute_labeling",
    "count_crossings",
    "detect_odd_cycles",
    "discover_instances",
    "document_to_dict",
    "drawing_from_solution",
    "emit_lp",
    "enumerate_semantics_bruteforce",
    "execute",
    "from_json",
    "grounded_extension",
    "initial_orders",
    "is_admissible",
    "is_complete",
    "is_conflict_free",
    "is_stable",
    "layers_for",
    "layout_geometry",
    "load_render_config",
    "objective_value",
    "optimize_drawing",
    "parse_af",
    "parse_extension",
    "parse_lp",
    "partition_edges",
    "proper_edges_cross",
    "random_af",
    "random_layered_instance",
    "rec_neutral_family",
    "rec_penalty_family",
    "run_benchmark",
    "run_pipeline",
    "satisfies_rec",
    "select_red_strategy_a",
    "select_red_strategy_b",
    "serialize_af",
    "solve_exact",
    "summarize",
    "to_csv",
    "to_json",
    "to_svg",
    "validate_document",
    "validate_drawing",
    "verify_report",
    "weighted_objective_weight",
]
