"""Request orchestration shared by the command line and the HTTP service.

A SolveRequest bundles instance text with solver options; execute() parses,
labels, runs the selected solver(s), and returns a JSON-ready payload plus
the drawing document.  All timing data lives in the payload's ``timing``
object so that the rest of the payload is byte-stable across runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any

from .af import (
    ArgumentationFramework,
    ParseError,
    compute_labeling,
    grounded_extension,
    is_admissible,
    is_complete,
    is_conflict_free,
    is_stable,
    parse_af,
)
from .annotate import build_annotations, detect_odd_cycles
from .exact import SolveStatus, solve_exact
from .heuristic import NonConflictFreeError, PipelineConfig, run_pipeline
from .layout import LayeredDrawing, partition_edges
from .render import DrawingDocument, build_document, document_to_dict

AF_FORMATS = ("apx", "iccma23", "tgf")
MODES = ("heuristic", "exact", "both")


class ExactInfeasibleError(RuntimeError):
    """The exact solver proved no drawing satisfies the red-edge constraint."""


@dataclass(frozen=True)
class SolveRequest:
    af_text: str
    format: str = "apx"
    extension: tuple[str, ...] | None = None
    semantics: str | None = None
    mode: str = "heuristic"
    rec: bool = True
    timeout_ms: int | None = None
    strategy: str = "A"
    seed: int | None = None
    name: str = "af"

    def __post_init__(self) -> None:
        if self.format not in AF_FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.strategy not in ("A", "B"):
            raise ValueError(f"unknown red strategy {self.strategy!r}")
        if (self.extension is None) == (self.semantics is None):
            raise ValueError("exactly one of extension / semantics must be given")
        if self.semantics is not None and self.semantics != "grounded":
            raise ValueError(f"unknown semantics {self.semantics!r}")
        if self.timeout_ms is not None and self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


@dataclass(frozen=True)
class SolveOutcome:
    payload: dict[str, Any]
    document: DrawingDocument


def resolve_extension(af: ArgumentationFramework, request: SolveRequest) -> frozenset[str]:
    if request.semantics is not None:
        return grounded_extension(af)
    assert request.extension is not None
    unknown = sorted(set(request.extension) - set(af.arguments))
    if unknown:
        raise ParseError(f"extension references unknown arguments {unknown}")
    return frozenset(request.extension)


def execute(request: SolveRequest) -> SolveOutcome:
    """Run the request end to end.

    Raises ParseError for malformed input, NonConflictFreeError when the
    chosen extension attacks itself, and ExactInfeasibleError when exact
    mode proves the red-edge constraint unsatisfiable.  The heuristic keeps
    red edges crossing-free by construction, so the rec flag only affects
    the exact solver.
    """
    af = parse_af(request.af_text, request.format)
    extension = resolve_extension(af, request)
    if not is_conflict_free(af, extension):
        raise NonConflictFreeError("extension is not conflict-free")
    labeling = compute_labeling(af, extension)
    partition = partition_edges(af, labeling)
    layers = (labeling.in_args, labeling.out_args, labeling.undec_args)
    config = PipelineConfig(red_strategy=request.strategy, seed=request.seed)

    timing: dict[str, float] = {}
    solve: dict[str, Any] = {
        "mode": request.mode,
        "rec": request.rec,
        "strategy": request.strategy,
        "seed": request.seed,
    }

    heuristic_result: tuple[LayeredDrawing, Any, Any] | None = None
    if request.mode in ("heuristic", "both"):
        t0 = time.monotonic()
        heuristic_result = run_pipeline(af, extension, config)
        timing["heuristic_ms"] = (time.monotonic() - t0) * 1000.0
        solve["heuristic"] = {
            "objective": heuristic_result[1].weighted_objective,
        }

    exact_result = None
    if request.mode in ("exact", "both"):
        t0 = time.monotonic()
        exact_result = solve_exact(partition, layers, request.rec, request.timeout_ms)
        timing["exact_ms"] = (time.monotonic() - t0) * 1000.0
        timing["exact_nodes"] = exact_result.nodes_explored
        if exact_result.status is SolveStatus.INFEASIBLE:
            raise ExactInfeasibleError(
                "no red edge choice satisfies the red-edge constraint")
        solve["exact"] = {
            "status": exact_result.status.value,
            "objective": exact_result.report.weighted_objective,
        }

    if request.mode == "both":
        assert heuristic_result is not None and exact_result is not None
        h_obj = heuristic_result[1].weighted_objective
        e_obj = exact_result.report.weighted_objective
        if e_obj > 0:
            solve["ratio"] = h_obj / e_obj
        else:
            rep = heuristic_result[1]
            solve["absolute_crossings"] = rep.c1 + rep.c2 + rep.c3 + rep.c4

    if exact_result is not None:
        drawing, report = exact_result.drawing, exact_result.report
        walks = detect_odd_cycles(labeling.undec_args, partition.e4)
        annotations = build_annotations(partition, drawing.red_edges, walks, labeling)
    else:
        assert heuristic_result is not None
        drawing, report, annotations = heuristic_result

    document = build_document(drawing, partition, annotations, report, name=request.name)
    payload = {
        "document": document_to_dict(document),
        "solve": solve,
        "timing": timing,
    }
    return SolveOutcome(payload=payload, document=document)


def verify_report(af: ArgumentationFramework, extension: frozenset[str]) -> dict[str, Any]:
    """Property report for cmd_verify: semantics membership booleans."""
    grounded = grounded_extension(af)
    return {
        "arguments": len(af.arguments),
        "attacks": len(af.attacks),
        "extension_size": len(extension),
        "conflict_free": is_conflict_free(af, extension),
        "admissible": is_admissible(af, extension),
        "complete": is_complete(af, extension),
        "stable": is_stable(af, extension),
        "grounded_subset": grounded <= extension,
        "equals_grounded": grounded == extension,
    }
