"""Three-layer drawings: edge partition, crossing counts, red-edge constraint.

Layers are vertical: IN left, OUT middle, UNDEC right.  Each layer is a
permutation, drawn top to bottom.  Edges between adjacent layers (IN/OUT and
OUT/UNDEC) are straight segments; edges inside OUT or inside UNDEC are
semicircular arcs bulging right of their layer.  Crossing counts therefore
depend only on the three permutations.

Edges between IN and UNDEC ("long" edges) and edges inside IN are kept for
rendering and flagging but never counted.

The weighted objective is W*c1 + c2 + c3 + c4 where W exceeds the largest
possible c2 + c3 + c4, so IN/OUT crossings dominate lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .af import ArgumentationFramework, Label, LayerAssignment

Edge = tuple[str, str]


@dataclass(frozen=True)
class EdgePartition:
    """Attack edges split by the layers of their endpoints.

    e1: IN/OUT (either direction), e2: within OUT, e3: OUT/UNDEC (either
    direction), e4: within UNDEC.  long_edges (IN/UNDEC) and in_in_edges
    (within IN) are excluded from every crossing count.
    """

    e1: tuple[Edge, ...]
    e2: tuple[Edge, ...]
    e3: tuple[Edge, ...]
    e4: tuple[Edge, ...]
    long_edges: tuple[Edge, ...]
    in_in_edges: tuple[Edge, ...]


@dataclass(frozen=True)
class LayeredDrawing:
    """Layer permutations plus the chosen red edge per OUT argument.

    red_edges maps an OUT argument to the IN argument whose attack on it was
    selected; the pair (source, target) is always an attack of the framework.
    """

    in_order: tuple[str, ...]
    out_order: tuple[str, ...]
    undec_order: tuple[str, ...]
    red_edges: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class CrossingReport:
    c1: int
    c2: int
    c3: int
    c4: int
    weighted_objective: int
    rec_violations: int


def partition_edges(af: ArgumentationFramework, labeling: LayerAssignment) -> EdgePartition:
    """Split every attack into its layer class, keeping attack order."""
    lab = labeling.label
    missing = [a for a in af.arguments if a not in lab]
    if missing:
        raise ValueError(f"labeling misses arguments {missing}")
    buckets: dict[str, list[Edge]] = {k: [] for k in ("e1", "e2", "e3", "e4", "long", "inin")}
    for src, tgt in af.attacks:
        pair = {lab[src], lab[tgt]}
        if pair == {Label.IN, Label.OUT}:
            buckets["e1"].append((src, tgt))
        elif pair == {Label.OUT}:
            buckets["e2"].append((src, tgt))
        elif pair == {Label.OUT, Label.UNDEC}:
            buckets["e3"].append((src, tgt))
        elif pair == {Label.UNDEC}:
            buckets["e4"].append((src, tgt))
        elif pair == {Label.IN, Label.UNDEC}:
            buckets["long"].append((src, tgt))
        else:
            buckets["inin"].append((src, tgt))
    return EdgePartition(
        e1=tuple(buckets["e1"]),
        e2=tuple(buckets["e2"]),
        e3=tuple(buckets["e3"]),
        e4=tuple(buckets["e4"]),
        long_edges=tuple(buckets["long"]),
        in_in_edges=tuple(buckets["inin"]),
    )


def weighted_objective_weight(partition: EdgePartition) -> int:
    """Upper bound on c2 + c3 + c4, plus one."""
    return comb(len(partition.e2), 2) + comb(len(partition.e3), 2) + comb(len(partition.e4), 2) + 1


def proper_edges_cross(
    e: tuple[int, int], f: tuple[int, int]
) -> bool:
    """Whether two straight inter-layer edges cross.

    Each edge is given as (left position, right position).  Edges sharing an
    endpoint never cross; otherwise they cross exactly when the left order is
    inverted relative to the right order.
    """
    if e[0] == f[0] or e[1] == f[1]:
        return False
    return (e[0] - f[0]) * (e[1] - f[1]) < 0


def arc_edges_cross(e: tuple[int, int], f: tuple[int, int]) -> bool:
    """Whether two same-layer arcs cross.

    Each arc is given by its endpoint positions.  Arcs cross exactly when
    their intervals strictly interleave; nesting and disjointness are free,
    and a shared endpoint never crosses.
    """
    a, b = min(e), max(e)
    c, d = min(f), max(f)
    return (a < c < b < d) or (c < a < d < b)


def _proper_pair_arrays(
    edges: tuple[Edge, ...],
    left_pos: dict[str, int],
    right_pos: dict[str, int],
) -> np.ndarray:
    rows = []
    for src, tgt in edges:
        if src in left_pos:
            rows.append((left_pos[src], right_pos[tgt]))
        else:
            rows.append((left_pos[tgt], right_pos[src]))
    return np.asarray(rows, dtype=np.int32).reshape(-1, 2)


def count_proper_crossings(pairs: np.ndarray) -> int:
    """Count inversions among (left, right) position pairs; vectorized."""
    if pairs.shape[0] < 2:
        return 0
    dl = pairs[:, 0:1] - pairs[:, 0:1].T
    dr = pairs[:, 1:2] - pairs[:, 1:2].T
    return int(((dl.astype(np.int64) * dr) < 0).sum() // 2)

def count_arc_crossings(intervals: np.ndarray) -> int:
    """Count strictly interleaving (lo, hi) interval pairs; vectorized."""
    if intervals.shape[0] < 2:
        return 0
    lo = intervals[:, 0]
    hi = intervals[:, 1]
    m = (lo[:, None] < lo[None, :]) & (lo[None, :] < hi[:, None]) & (hi[:, None] < hi[None, :])
    return int(m.sum())


def _arc_intervals(edges: tuple[Edge, ...], pos: dict[str, int]) -> np.ndarray:
    rows = []
    for src, tgt in edges:
        p, q = pos[src], pos[tgt]
        rows.append((p, q) if p <= q else (q, p))
    return np.asarray(rows, dtype=np.int32).reshape(-1, 2)


def count_crossings(drawing: LayeredDrawing, partition: EdgePartition) -> CrossingReport:
    """Exact crossing counts for a drawing, by layer class, plus the weighted
    objective and the number of crossing red-edge pairs."""
    pos_in = {a: i for i, a in enumerate(drawing.in_order)}
    pos_out = {a: i for i, a in enumerate(drawing.out_order)}
    pos_undec = {a: i for i, a in enumerate(drawing.undec_order)}

    c1 = count_proper_crossings(_proper_pair_arrays(partition.e1, pos_in, pos_out))
    c2 = count_arc_crossings(_arc_intervals(partition.e2, pos_out))
    c3 = count_proper_crossings(_proper_pair_arrays(partition.e3, pos_out, pos_undec))
    c4 = count_arc_crossings(_arc_intervals(partition.e4, pos_undec))

    red_pairs = np.asarray(
        [(pos_in[src], pos_out[tgt]) for tgt, src in drawing.red_edges.items()],
        dtype=np.int32,
    ).reshape(-1, 2)
    rec_violations = count_proper_crossings(red_pairs)

    weight = weighted_objective_weight(partition)
    return CrossingReport(
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        weighted_objective=weight * c1 + c2 + c3 + c4,
        rec_violations=rec_violations,
    )


def satisfies_rec(drawing: LayeredDrawing) -> bool:
    """Whether the chosen red edges are pairwise non-crossing."""
    pos_in = {a: i for i, a in enumerate(drawing.in_order)}
    pos_out = {a: i for i, a in enumerate(drawing.out_order)}
    pairs = np.asarray(
        [(pos_in[src], pos_out[tgt]) for tgt, src in drawing.red_edges.items()],
        dtype=np.int32,
    ).reshape(-1, 2)
    return count_proper_crossings(pairs) == 0


def validate_drawing(
    drawing: LayeredDrawing,
    af: ArgumentationFramework,
    labeling: LayerAssignment,
    require_total_reds: bool = True,
) -> None:
    """Raise ValueError unless the drawing is structurally sound.

    Orders must be permutations of their layers; each red edge must be an
    IN -> OUT attack ending at its key.  With require_total_reds every OUT
    argument with at least one IN attacker must carry a red edge.
    """
    if sorted(drawing.in_order) != sorted(labeling.in_args):
        raise ValueError("in_order is not a permutation of the IN layer")
    if sorted(drawing.out_order) != sorted(labeling.out_args):
        raise ValueError("out_order is not a permutation of the OUT layer")
    if sorted(drawing.undec_order) != sorted(labeling.undec_args):
        raise ValueError("undec_order is not a permutation of the UNDEC layer")
    in_set = set(drawing.in_order)
    attack_set = af.attack_set
    for tgt, src in drawing.red_edges.items():
        if tgt not in set(drawing.out_order) or src not in in_set:
            raise ValueError(f"red edge ({src}, {tgt}) does not run IN -> OUT")
        if (src, tgt) not in attack_set:
            raise ValueError(f"red edge ({src}, {tgt}) is not an attack")
    if require_total_reds:
        for tgt in drawing.out_order:
            if tgt in drawing.red_edges:
                continue
            if any(src in in_set for src in af.attackers[tgt]):
                raise ValueError(f"OUT argument {tgt} has IN attackers but no red edge")
