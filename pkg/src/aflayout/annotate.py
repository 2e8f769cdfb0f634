"""Semantic highlighting: red witness edges, odd cycles, display classes.

Every OUT argument is attacked by some IN argument; one such incoming attack
is selected as its red witness edge.  Two selection strategies exist:

    A   greedy maximum coverage: repeatedly pick the IN argument attacking
        the most still-uncovered OUT arguments (ties: topmost in IN order)
    B   repeated maximum bipartite matchings between IN and the uncovered
        OUT arguments until every OUT argument is covered

Odd directed cycles inside the UNDEC layer are detected per strongly
connected component: the component's period (gcd of its cycle lengths,
computed as the gcd of BFS level slacks) is odd exactly when an odd cycle
exists, and one shortest odd closed walk is then recovered by breadth-first
search on the (vertex, parity) product graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from math import gcd

from .af import ArgumentationFramework, Label, LayerAssignment
from .layout import Edge, EdgePartition


class EdgeDisplay(Enum):
    RED = "RED"
    ORANGE = "ORANGE"
    ODD_CYCLE = "ODD_CYCLE"
    LONG_FLAG = "LONG_FLAG"
    PLAIN = "PLAIN"


class ArgumentDisplay(Enum):
    ORANGE_ATTACKER = "ORANGE_ATTACKER"
    ODD_CYCLE_MEMBER = "ODD_CYCLE_MEMBER"
    NON_ATTACKING_IN = "NON_ATTACKING_IN"
    UNATTACKED_UNDEC = "UNATTACKED_UNDEC"
    PLAIN = "PLAIN"


@dataclass(frozen=True)
class AnnotationSet:
    edge_class: dict[Edge, EdgeDisplay]
    argument_class: dict[str, ArgumentDisplay]


class RedSelectionError(ValueError):
    """An OUT argument has no IN attacker, so no red witness exists."""

    def __init__(self, argument: str):
        super().__init__(f"OUT argument {argument!r} has no IN attacker")
        self.argument = argument


def _in_to_out_edges(partition: EdgePartition, in_set: set[str]) -> list[Edge]:
    return [(s, t) for s, t in partition.e1 if s in in_set]


def select_red_strategy_a(
    partition: EdgePartition, in_order: tuple[str, ...], out_order: tuple[str, ...]
) -> dict[str, str]:
    """Greedy maximum-coverage red selection; returns OUT argument -> IN source."""
    in_set = set(in_order)
    covers: dict[str, set[str]] = {u: set() for u in in_order}
    for src, tgt in _in_to_out_edges(partition, in_set):
        covers[src].add(tgt)
    attacked = set().union(*covers.values()) if covers else set()
    uncovered = set()
    for t in out_order:
        if t not in attacked:
            raise RedSelectionError(t)
        uncovered.add(t)
    reds: dict[str, str] = {}
    in_pos = {u: i for i, u in enumerate(in_order)}
    while uncovered:
        # topmost IN argument among those covering the most uncovered targets
        best = max(in_order, key=lambda u: (len(covers[u] & uncovered), -in_pos[u]))
        gained = covers[best] & uncovered
        for t in gained:
            reds[t] = best
        uncovered -= gained
    return {t: reds[t] for t in out_order}


def _hopcroft_karp(
    left: list[str], adj: dict[str, list[str]]
) -> dict[str, str]:
    """Maximum bipartite matching; returns right vertex -> matched left vertex.

    Deterministic: vertices and adjacency are processed in list order.
    """
    INF = float("inf")
    match_left: dict[str, str | None] = {u: None for u in left}
    match_right: dict[str, str] = {}
    while True:
        dist: dict[str, float] = {}
        queue: deque[str] = deque()
        for u in left:
            if match_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_right.get(v)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return match_right

        def try_augment(u: str) -> bool:
            for v in adj[u]:
                w = match_right.get(v)
                if w is None or (dist[w] == dist[u] + 1 and try_augment(w)):
                    match_right[v] = u
                    match_left[u] = v
                    return True
            dist[u] = INF
            return False

        for u in left:
            if match_left[u] is None:
                try_augment(u)


def select_red_strategy_b(
    partition: EdgePartition, in_order: tuple[str, ...], out_order: tuple[str, ...]
) -> dict[str, str]:
    """Red selection by repeated maximum matchings; returns OUT argument -> IN source."""
    in_set = set(in_order)
    out_pos = {t: i for i, t in enumerate(out_order)}
    targets: dict[str, list[str]] = {u: [] for u in in_order}
    attacked: set[str] = set()
    for src, tgt in _in_to_out_edges(partition, in_set):
        if tgt not in targets[src]:
            targets[src].append(tgt)
        attacked.add(tgt)
    for t in out_order:
        if t not in attacked:
            raise RedSelectionError(t)
    reds: dict[str, str] = {}
    uncovered = set(out_order)
    while uncovered:
        adj = {
            u: sorted((t for t in targets[u] if t in uncovered), key=out_pos.__getitem__)
            for u in in_order
        }
        matching = _hopcroft_karp(list(in_order), adj)
        for t, u in matching.items():
            reds[t] = u
        uncovered -= set(matching)
    return {t: reds[t] for t in out_order}


# ---------------------------------------------------------------------------
# odd cycles in UNDEC
# ---------------------------------------------------------------------------


def _strongly_connected_components(
    nodes: tuple[str, ...], adj: dict[str, list[str]]
) -> list[list[str]]:
    """Iterative Tarjan; components listed in root discovery order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            for k in range(ei, len(adj[v])):
                w = adj[v][k]
                if w not in index:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def _shortest_odd_walk(
    comp: list[str], adj: dict[str, list[str]], node_pos: dict[str, int]
) -> tuple[str, ...]:
    """Shortest odd closed walk within a component known to contain one.

    BFS on (vertex, parity): an odd closed walk through s is a path from
    (s, 0) to (s, 1).  Starts are tried in layer order; ties go to the
    earliest start and the BFS parent order.
    """
    comp_set = set(comp)
    starts = sorted(comp, key=node_pos.__getitem__)
    best: tuple[str, ...] | None = None
    for s in starts:
        parent: dict[tuple[str, int], tuple[str, int] | None] = {(s, 0): None}
        queue: deque[tuple[str, int]] = deque([(s, 0)])
        goal: tuple[str, int] | None = None
        while queue and goal is None:
            v, par = queue.popleft()
            for w in adj[v]:
                if w not in comp_set:
                    continue
                nxt = (w, 1 - par)
                if nxt in parent:
                    continue
                parent[nxt] = (v, par)
                if nxt == (s, 1):
                    goal = nxt
                    break
                queue.append(nxt)
        if goal is None:
            continue
        walk: list[str] = []
        cur: tuple[str, int] | None = goal
        while cur is not None:
            walk.append(cur[0])
            cur = parent[cur]
        walk.reverse()  # s ... s with an odd number of edges
        candidate = tuple(walk[:-1])
        if best is None or len(candidate) < len(best):
            best = candidate
    if best is None:
        raise AssertionError("odd period component without an odd walk")
    return best


def detect_odd_cycles(
    undec_nodes: tuple[str, ...], undec_edges: tuple[Edge, ...]
) -> list[tuple[str, ...]]:
    """One shortest odd closed walk per odd-period SCC of the UNDEC subgraph.

    Walks are vertex tuples (v0, .., v_{L-1}) denoting v0 -> .. -> v_{L-1} -> v0
    with L odd; a self-loop yields a length-1 walk.
    """
    node_pos = {a: i for i, a in enumerate(undec_nodes)}
    adj: dict[str, list[str]] = {a: [] for a in undec_nodes}
    for src, tgt in undec_edges:
        adj[src].append(tgt)
    walks: list[tuple[str, ...]] = []
    for comp in _strongly_connected_components(undec_nodes, adj):
        comp_set = set(comp)
        intra = [(u, v) for u in comp for v in adj[u] if v in comp_set]
        if not intra:
            continue
        # BFS leveling from the component's first node in layer order
        root = min(comp, key=node_pos.__getitem__)
        level = {root: 0}
        queue: deque[str] = deque([root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w in comp_set and w not in level:
                    level[w] = level[v] + 1
                    queue.append(w)
        period = 0
        for u, v in intra:
            period = gcd(period, abs(level[u] + 1 - level[v]))
        if period % 2 == 0:
            continue
        walks.append(_shortest_odd_walk(comp, adj, node_pos))
    return walks


# ---------------------------------------------------------------------------
# display classes
# ---------------------------------------------------------------------------


def build_annotations(
    partition: EdgePartition,
    reds: dict[str, str],
    odd_walks: list[tuple[str, ...]],
    labeling: LayerAssignment,
) -> AnnotationSet:
    """Assign a display class to every edge and argument."""
    lab = labeling.label
    walk_edges: set[Edge] = set()
    walk_members: set[str] = set()
    for walk in odd_walks:
        walk_members.update(walk)
        for i, v in enumerate(walk):
            walk_edges.add((v, walk[(i + 1) % len(walk)]))

    edge_class: dict[Edge, EdgeDisplay] = {}
    for src, tgt in partition.e1:
        if lab[src] is Label.IN:
            red = reds.get(tgt) == src
            edge_class[(src, tgt)] = EdgeDisplay.RED if red else EdgeDisplay.ORANGE
        else:
            edge_class[(src, tgt)] = EdgeDisplay.PLAIN
    for e in partition.e2 + partition.e3 + partition.in_in_edges:
        edge_class[e] = EdgeDisplay.PLAIN
    for e in partition.e4:
        edge_class[e] = EdgeDisplay.ODD_CYCLE if e in walk_edges else EdgeDisplay.PLAIN
    for e in partition.long_edges:
        edge_class[e] = EdgeDisplay.LONG_FLAG

    attacking_in: set[str] = {s for s, t in partition.e1 if lab[s] is Label.IN}
    incoming_e4: set[str] = {t for _, t in partition.e4}
    argument_class: dict[str, ArgumentDisplay] = {}
    for a, label in lab.items():
        if label is Label.IN:
            argument_class[a] = (
                ArgumentDisplay.ORANGE_ATTACKER if a in attacking_in else ArgumentDisplay.NON_ATTACKING_IN
            )
        elif label is Label.UNDEC:
            if a in walk_members:
                argument_class[a] = ArgumentDisplay.ODD_CYCLE_MEMBER
            elif a not in incoming_e4:
                argument_class[a] = ArgumentDisplay.UNATTACKED_UNDEC
            else:
                argument_class[a] = ArgumentDisplay.PLAIN
        else:
            argument_class[a] = ArgumentDisplay.PLAIN
    return AnnotationSet(edge_class=edge_class, argument_class=argument_class)
