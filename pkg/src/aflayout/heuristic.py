"""Fast layout pipeline: red selection, barycenter variants, local search.

The pipeline builds a drawing whose red edges never cross:

    1. initial orders (declaration order, optionally seed-shuffled)
    2. red selection (strategy A or B)
    3. barycenter sequence, repeated while it strictly improves:
         variant 1  group OUT arguments by red source
         variant 2  barycenter inside each red group
         variant 3  reorder red-source IN arguments to kill red crossings
         variant 4  full IN barycenter with a red-order repair pass
    4. UNDEC ordering by alternating barycenter sweeps
    5. adjacent-transposition hill climbing over all three layers
    6. local search over alternative red edges on the winning restart,
       followed by one more round of steps 4 and 5

The first pass of the sequence is applied unconditionally: variants 1 and 3
establish the red-edge constraint, which later passes and the local
searches preserve by construction: swaps never reorder two red sources,
and OUT groups move only as whole blocks together with their sources.

Steps 5 and 6 and the seeded restarts are skipped above a size threshold
(polish_size_cap) so large instances stay within interactive budgets; the
barycenter core alone handles those.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .af import ArgumentationFramework, LayerAssignment, compute_labeling, is_conflict_free
from .annotate import (
    AnnotationSet,
    RedSelectionError,
    build_annotations,
    detect_odd_cycles,
    select_red_strategy_a,
    select_red_strategy_b,
)
from .layout import (
    CrossingReport,
    Edge,
    EdgePartition,
    LayeredDrawing,
    count_crossings,
    partition_edges,
    weighted_objective_weight,
)


class NonConflictFreeError(ValueError):
    """The supplied extension attacks itself; no drawing is produced."""


@dataclass(frozen=True)
class PipelineConfig:
    red_strategy: str = "A"
    max_rounds: int = 20
    seed: int | None = None
    restarts: int = 4
    polish_size_cap: int = 150  # |A|+|R| above which polish steps are skipped

    def __post_init__(self) -> None:
        if self.red_strategy not in ("A", "B"):
            raise ValueError(f"red_strategy must be 'A' or 'B', got {self.red_strategy!r}")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.seed is not None and not (0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")


def barycenter_reorder(
    movable_layer_order: tuple[str, ...],
    fixed_layer_order: tuple[str, ...],
    edges: tuple[Edge, ...],
) -> tuple[str, ...]:
    """Stable sort of the movable layer by mean fixed-neighbor position.

    Edges not connecting a movable to a fixed vertex are ignored, so a
    sublayer can be reordered against the full fixed layer.  Degree-0
    vertices keep their current position index as key.
    """
    fixed_pos = {a: i for i, a in enumerate(fixed_layer_order)}
    movable_set = set(movable_layer_order)
    sums: dict[str, float] = {a: 0.0 for a in movable_layer_order}
    degs: dict[str, int] = {a: 0 for a in movable_layer_order}
    for p, q in edges:
        if p in movable_set and q in fixed_pos:
            m, f = p, q
        elif q in movable_set and p in fixed_pos:
            m, f = q, p
        else:
            continue
        sums[m] += fixed_pos[f]
        degs[m] += 1
    keys: dict[str, float] = {}
    for i, a in enumerate(movable_layer_order):
        keys[a] = sums[a] / degs[a] if degs[a] else float(i)
    return tuple(sorted(movable_layer_order, key=keys.__getitem__))


def _red_group_sequence(drawing: LayeredDrawing) -> list[str]:
    """Red sources in order of their groups' first occurrence along OUT.

    Raises if some group is split (non-consecutive members).
    """
    finished: set[str] = set()
    seq: list[str] = []
    last: str | None = None
    for t in drawing.out_order:
        s = drawing.red_edges[t]
        if s == last:
            continue
        if s in finished:
            raise ValueError("red groups are not consecutive in the OUT order")
        if last is not None:
            finished.add(last)
        seq.append(s)
        last = s
    return seq


def group_out_by_red(drawing: LayeredDrawing) -> tuple[str, ...]:
    """Variant 1: make each red source's OUT targets consecutive.

    Groups are ordered by the mean current position of their members;
    within-group order is preserved.
    """
    pos = {a: i for i, a in enumerate(drawing.out_order)}
    members: dict[str, list[str]] = {}
    appearance: list[str] = []
    for t in drawing.out_order:
        s = drawing.red_edges[t]
        if s not in members:
            members[s] = []
            appearance.append(s)
        members[s].append(t)
    means = {s: sum(pos[m] for m in members[s]) / len(members[s]) for s in appearance}
    ordered = sorted(appearance, key=means.__getitem__)
    return tuple(m for s in ordered for m in members[s])


def reorder_within_groups(drawing: LayeredDrawing, partition: EdgePartition) -> tuple[str, ...]:
    """Variant 2: barycenter each red group against IN; boundaries unchanged."""
    new_out: list[str] = []
    group: list[str] = []
    group_src: str | None = None
    for t in drawing.out_order:
        s = drawing.red_edges[t]
        if s != group_src and group:
            new_out.extend(barycenter_reorder(tuple(group), drawing.in_order, partition.e1))
            group = []
        group_src = s
        group.append(t)
    if group:
        new_out.extend(barycenter_reorder(tuple(group), drawing.in_order, partition.e1))
    return tuple(new_out)


def reorder_in_red_sources(drawing: LayeredDrawing) -> tuple[str, ...]:
    """Variant 3: permute red sources into their OUT groups' order.

    Red sources keep the same position multiset inside IN; other IN
    arguments do not move.  Afterwards no two red edges cross.
    """
    seq = _red_group_sequence(drawing)
    source_set = set(seq)
    new_in = list(drawing.in_order)
    slots = [i for i, a in enumerate(new_in) if a in source_set]
    for slot, src in zip(slots, seq):
        new_in[slot] = src
    return tuple(new_in)


def reorder_in_all(drawing: LayeredDrawing, partition: EdgePartition) -> tuple[str, ...]:
    """Variant 4: full IN barycenter, then reinsert red sources in the
    order the red-edge constraint requires, into the slots that red
    sources occupy after the sort."""
    sorted_in = list(barycenter_reorder(drawing.in_order, drawing.out_order, partition.e1))
    if not drawing.red_edges:
        return tuple(sorted_in)
    seq = _red_group_sequence(drawing)
    source_set = set(seq)
    slots = [i for i, a in enumerate(sorted_in) if a in source_set]
    for slot, src in zip(slots, seq):
        sorted_in[slot] = src
    return tuple(sorted_in)


def apply_barycenter_sequence(drawing: LayeredDrawing, partition: EdgePartition) -> LayeredDrawing:
    """One pass of variants 1-4; leaves UNDEC untouched."""
    if not drawing.out_order:
        return drawing
    d = replace(drawing, out_order=group_out_by_red(drawing))
    d = replace(d, out_order=reorder_within_groups(d, partition))
    d = replace(d, in_order=reorder_in_red_sources(d))
    d = replace(d, in_order=reorder_in_all(d, partition))
    return d


def local_search_red_swap(
    drawing: LayeredDrawing, partition: EdgePartition, config: PipelineConfig
) -> LayeredDrawing:
    """Try every alternative red edge; keep a swap only on strict improvement.

    OUT arguments are visited in their order at entry; alternatives in the
    current IN order.  Each trial re-runs the barycenter sequence so the
    red-edge constraint keeps holding.
    """
    in_attackers: dict[str, list[str]] = {}
    in_set = set(drawing.in_order)
    for src, tgt in partition.e1:
        if src in in_set:
            in_attackers.setdefault(tgt, []).append(src)
    best = drawing
    best_obj = count_crossings(best, partition).weighted_objective
    for t in drawing.out_order:
        alternatives = in_attackers.get(t, [])
        if len(alternatives) < 2:
            continue
        in_pos = {a: i for i, a in enumerate(best.in_order)}
        for u in sorted(set(alternatives), key=in_pos.__getitem__):
            if u == best.red_edges[t]:
                continue
            trial_reds = dict(best.red_edges)
            trial_reds[t] = u
            trial = apply_barycenter_sequence(replace(best, red_edges=trial_reds), partition)
            obj = count_crossings(trial, partition).weighted_objective
            if obj < best_obj:
                best, best_obj = trial, obj
    return best


def _arc_neighbor_reorder(order: tuple[str, ...], arcs: tuple[Edge, ...]) -> tuple[str, ...]:
    """Barycenter within one layer: keys are mean arc-neighbor positions."""
    pos = {a: i for i, a in enumerate(order)}
    sums: dict[str, float] = {a: 0.0 for a in order}
    degs: dict[str, int] = {a: 0 for a in order}
    for p, q in arcs:
        if p in pos and q in pos:
            sums[p] += pos[q]
            degs[p] += 1
            sums[q] += pos[p]
            degs[q] += 1
    keys = {a: (sums[a] / degs[a] if degs[a] else float(i)) for i, a in enumerate(order)}
    return tuple(sorted(order, key=keys.__getitem__))


_POLISH_PASSES = 8


def _out_groups(drawing: LayeredDrawing) -> list[tuple[str, list[str]]]:
    """Consecutive (red source, members) blocks along the OUT order."""
    groups: list[tuple[str, list[str]]] = []
    for t in drawing.out_order:
        s = drawing.red_edges[t]
        if groups and groups[-1][0] == s:
            groups[-1][1].append(t)
        else:
            groups.append((s, [t]))
    return groups


def _proper_swap_delta(nbrs_u: list[str], nbrs_v: list[str],
                       pos_other: dict[str, int]) -> int:
    """Crossing-count change among edges at u and v when the adjacent pair
    (u above v) swaps; the other endpoints stay fixed."""
    delta = 0
    for a in nbrs_u:
        pa = pos_other[a]
        for b in nbrs_v:
            pb = pos_other[b]
            if pa < pb:
                delta += 1
            elif pa > pb:
                delta -= 1
    return delta


def _arc_pair_count(arcs: list[Edge], pos: dict[str, int]) -> int:
    """Pairwise strict-interleaving count among the given same-layer arcs."""
    spans = []
    for p, q in arcs:
        pp, pq = pos[p], pos[q]
        spans.append((pp, pq) if pp < pq else (pq, pp))
    total = 0
    for x in range(len(spans)):
        lx, hx = spans[x]
        for y in range(x + 1, len(spans)):
            ly, hy = spans[y]
            if lx < ly < hx < hy or ly < lx < hy < hx:
                total += 1
    return total


def _arc_swap_delta(u: str, v: str, arcs_at: dict[str, list[Edge]],
                    pos: dict[str, int]) -> int:
    """Arc-crossing change for swapping adjacent u, v within their layer.

    Positions are integers, so a pair's interleaving can only change when
    both arcs touch {u, v}; everything else keeps every strict comparison.
    """
    local: list[Edge] = list(arcs_at.get(u, ()))
    seen = set(map(id, local))
    for arc in arcs_at.get(v, ()):
        if id(arc) not in seen:
            local.append(arc)
    if len(local) < 2:
        return 0
    before = _arc_pair_count(local, pos)
    pos[u], pos[v] = pos[v], pos[u]
    after = _arc_pair_count(local, pos)
    pos[u], pos[v] = pos[v], pos[u]
    return after - before


class _SwapContext:
    """Shared adjacency and position state for the transposition search."""

    def __init__(self, drawing: LayeredDrawing, partition: EdgePartition) -> None:
        in_set = set(drawing.in_order)
        out_set = set(drawing.out_order)
        undec_set = set(drawing.undec_order)
        self.weight = weighted_objective_weight(partition)
        self.pos1 = {a: i for i, a in enumerate(drawing.in_order)}
        self.pos2 = {a: i for i, a in enumerate(drawing.out_order)}
        self.pos3 = {a: i for i, a in enumerate(drawing.undec_order)}
        self.e1_at_in: dict[str, list[str]] = {a: [] for a in in_set}
        self.e1_at_out: dict[str, list[str]] = {a: [] for a in out_set}
        for s, t in partition.e1:
            i, o = (s, t) if s in in_set else (t, s)
            self.e1_at_in[i].append(o)
            self.e1_at_out[o].append(i)
        self.e3_at_out: dict[str, list[str]] = {a: [] for a in out_set}
        self.e3_at_undec: dict[str, list[str]] = {a: [] for a in undec_set}
        for s, t in partition.e3:
            o, x = (s, t) if s in out_set else (t, s)
            self.e3_at_out[o].append(x)
            self.e3_at_undec[x].append(o)
        self.arcs2_at: dict[str, list[Edge]] = {a: [] for a in out_set}
        for arc in partition.e2:
            if arc[0] != arc[1]:
                self.arcs2_at[arc[0]].append(arc)
                self.arcs2_at[arc[1]].append(arc)
        self.arcs4_at: dict[str, list[Edge]] = {a: [] for a in undec_set}
        for arc in partition.e4:
            if arc[0] != arc[1]:
                self.arcs4_at[arc[0]].append(arc)
                self.arcs4_at[arc[1]].append(arc)

    def in_swap_delta(self, u: str, v: str) -> int:
        return self.weight * _proper_swap_delta(
            self.e1_at_in[u], self.e1_at_in[v], self.pos2)

    def out_swap_delta(self, u: str, v: str) -> int:
        return (self.weight * _proper_swap_delta(
                    self.e1_at_out[u], self.e1_at_out[v], self.pos1)
                + _proper_swap_delta(self.e3_at_out[u], self.e3_at_out[v], self.pos3)
                + _arc_swap_delta(u, v, self.arcs2_at, self.pos2))

    def undec_swap_delta(self, u: str, v: str) -> int:
        return (_proper_swap_delta(self.e3_at_undec[u], self.e3_at_undec[v], self.pos2)
                + _arc_swap_delta(u, v, self.arcs4_at, self.pos3))


def local_search_adjacent(
    drawing: LayeredDrawing, partition: EdgePartition, max_passes: int = _POLISH_PASSES
) -> LayeredDrawing:
    """Adjacent-transposition hill climb over all three layers.

    Moves keep the red-edge constraint intact: two red sources are never
    swapped with each other directly, and OUT arguments move within their
    red group only, except for whole-group block swaps that exchange the
    two groups' sources on IN in the same move.  Single swaps are scored
    by incremental deltas; block swaps by a full recount.
    """
    ctx = _SwapContext(drawing, partition)
    in_order = list(drawing.in_order)
    out_order = list(drawing.out_order)
    undec_order = list(drawing.undec_order)
    sources = set(drawing.red_edges.values())
    obj = count_crossings(drawing, partition).weighted_objective

    def sweep(order: list[str], pos: dict[str, int], delta_fn, allowed) -> bool:
        nonlocal obj
        improved = False
        for i in range(len(order) - 1):
            u, v = order[i], order[i + 1]
            if not allowed(u, v):
                continue
            d = delta_fn(u, v)
            if d < 0:
                order[i], order[i + 1] = v, u
                pos[u], pos[v] = pos[v], pos[u]
                obj += d
                improved = True
        return improved

    current = drawing
    for _ in range(max_passes):
        improved = sweep(in_order, ctx.pos1, ctx.in_swap_delta,
                         lambda u, v: not (u in sources and v in sources))
        improved |= sweep(out_order, ctx.pos2, ctx.out_swap_delta,
                          lambda u, v: current.red_edges.get(u) == current.red_edges.get(v))
        improved |= sweep(undec_order, ctx.pos3, ctx.undec_swap_delta,
                          lambda u, v: True)
        current = replace(current, in_order=tuple(in_order),
                          out_order=tuple(out_order), undec_order=tuple(undec_order))
        if current.red_edges:
            groups = _out_groups(current)
            for g in range(len(groups) - 1):
                (s1, m1), (s2, m2) = groups[g], groups[g + 1]
                swapped = groups[:g] + [(s2, m2), (s1, m1)] + groups[g + 2:]
                new_out = tuple(t for _, ms in swapped for t in ms)
                new_in = list(current.in_order)
                i1, i2 = new_in.index(s1), new_in.index(s2)
                new_in[i1], new_in[i2] = s2, s1
                cand = replace(current, out_order=new_out, in_order=tuple(new_in))
                cand_obj = count_crossings(cand, partition).weighted_objective
                if cand_obj < obj:
                    current, obj = cand, cand_obj
                    improved = True
                    groups = _out_groups(current)
                    in_order = list(current.in_order)
                    out_order = list(current.out_order)
                    ctx.pos1 = {a: i for i, a in enumerate(in_order)}
                    ctx.pos2 = {a: i for i, a in enumerate(out_order)}
        if not improved:
            break
    return current


_UNDEC_SWEEPS = 10


def undec_sweeps(drawing: LayeredDrawing, partition: EdgePartition) -> LayeredDrawing:
    """Alternating UNDEC sweeps: barycenter vs OUT, then arc neighbors.

    Each round is kept only if the weighted objective strictly drops,
    capped at 10 rounds.
    """
    if not drawing.undec_order:
        return drawing
    best = drawing
    best_obj = count_crossings(best, partition).weighted_objective
    for _ in range(_UNDEC_SWEEPS):
        order = barycenter_reorder(best.undec_order, best.out_order, partition.e3)
        order = _arc_neighbor_reorder(order, partition.e4)
        cand = replace(best, undec_order=order)
        obj = count_crossings(cand, partition).weighted_objective
        if obj < best_obj:
            best, best_obj = cand, obj
        else:
            break
    return best


def _optimize_once(
    initial: LayeredDrawing, partition: EdgePartition, config: PipelineConfig,
    polish: bool,
) -> tuple[LayeredDrawing, CrossingReport]:
    drawing = initial
    if drawing.out_order:
        select = select_red_strategy_a if config.red_strategy == "A" else select_red_strategy_b
        reds = select(partition, drawing.in_order, drawing.out_order)
        drawing = replace(drawing, red_edges=reds)
        drawing = apply_barycenter_sequence(drawing, partition)
        obj = count_crossings(drawing, partition).weighted_objective
        for _ in range(config.max_rounds - 1):
            cand = apply_barycenter_sequence(drawing, partition)
            cand_obj = count_crossings(cand, partition).weighted_objective
            if cand_obj < obj:
                drawing, obj = cand, cand_obj
            else:
                break
    drawing = undec_sweeps(drawing, partition)
    if polish:
        drawing = local_search_adjacent(drawing, partition)
    return drawing, count_crossings(drawing, partition)


def _partition_size(partition: EdgePartition) -> int:
    return (len(partition.e1) + len(partition.e2) + len(partition.e3)
            + len(partition.e4) + len(partition.long_edges) + len(partition.in_in_edges))


def optimize_drawing(
    initial: LayeredDrawing, partition: EdgePartition, config: PipelineConfig
) -> tuple[LayeredDrawing, CrossingReport]:
    """Pipeline core on prepared orders; red selection through local search.

    Small instances additionally run seeded restarts and transposition
    polish; the best drawing over all starts wins (ties keep the earliest).
    The red-edge swap search runs once, on the winner only, because every
    candidate it tries re-runs the whole barycenter sequence.
    """
    n_args = len(initial.in_order) + len(initial.out_order) + len(initial.undec_order)
    small = n_args + _partition_size(partition) <= config.polish_size_cap
    starts = [initial]
    if small and config.restarts:
        rng = random.Random(0 if config.seed is None else config.seed)
        for _ in range(config.restarts):
            starts.append(replace(
                initial,
                in_order=tuple(rng.sample(initial.in_order, len(initial.in_order))),
                out_order=tuple(rng.sample(initial.out_order, len(initial.out_order))),
                undec_order=tuple(rng.sample(initial.undec_order, len(initial.undec_order))),
            ))
    best: tuple[LayeredDrawing, CrossingReport] | None = None
    for start in starts:
        result = _optimize_once(start, partition, config, polish=small)
        if best is None or result[1].weighted_objective < best[1].weighted_objective:
            best = result
    assert best is not None
    if small and best[0].out_order:
        cand = local_search_red_swap(best[0], partition, config)
        cand = undec_sweeps(cand, partition)
        cand = local_search_adjacent(cand, partition)
        cand_report = count_crossings(cand, partition)
        if cand_report.weighted_objective < best[1].weighted_objective:
            best = (cand, cand_report)
    return best


def initial_orders(
    labeling: LayerAssignment, seed: int | None
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    """Declaration-order layers, shuffled only when a seed is given."""
    layers = [list(labeling.in_args), list(labeling.out_args), list(labeling.undec_args)]
    if seed is not None:
        rng = random.Random(seed)
        for layer in layers:
            rng.shuffle(layer)
    return tuple(layers[0]), tuple(layers[1]), tuple(layers[2])


def run_pipeline(
    af: ArgumentationFramework,
    extension: frozenset[str],
    config: PipelineConfig | None = None,
) -> tuple[LayeredDrawing, CrossingReport, AnnotationSet]:
    """Full heuristic solve for one AF and extension.

    Requires a conflict-free extension; raises NonConflictFreeError
    otherwise and RedSelectionError when an OUT argument has no IN attacker.
    """
    cfg = config or PipelineConfig()
    if not is_conflict_free(af, extension):
        raise NonConflictFreeError("extension is not conflict-free")
    labeling = compute_labeling(af, extension)
    partition = partition_edges(af, labeling)
    in0, out0, undec0 = initial_orders(labeling, cfg.seed)
    drawing = LayeredDrawing(in_order=in0, out_order=out0, undec_order=undec0, red_edges={})
    drawing, report = optimize_drawing(drawing, partition, cfg)
    walks = detect_odd_cycles(labeling.undec_args, partition.e4)
    annotations = build_annotations(partition, drawing.red_edges, walks, labeling)
    return drawing, report, annotations
