"""Exact crossing minimization: 0-1 model, branch-and-bound, brute oracle.

Three independent routes to the optimum live here:

* build_ilp / emit_lp construct a 0-1 linear model over order variables
  (x for IN, y for OUT, z for UNDEC, one per ordered index pair), crossing
  variables per four-distinct-endpoint edge pair, and red variables per
  IN -> OUT attack, for solving with any external MILP solver.
* solve_exact is a built-in branch-and-bound over interleaved position
  assignments: IN and OUT arguments are placed top to bottom in strict
  alternation (then UNDEC in an inner search memoized per OUT order).
  Once two arguments are placed their relative order is final, so every
  edge pair whose endpoints are no longer both-unplaced on either layer
  contributes a known crossing; the sum of those is the base lower bound.
  After the opposite layer completes, the bound is tightened by the
  pairwise minimum: for every unplaced same-layer pair the cheaper of the
  two relative orders is added.  The incumbent starts from the heuristic
  pipeline, so the search only has to prove optimality or beat it.
* brute_force_oracle enumerates all layer permutations outright.  The
  weighted objective splits as W*c1(p1,p2) + c2(p2) + c3(p2,p3) + c4(p3),
  so for each OUT permutation the best IN and UNDEC permutations are found
  independently; the red-edge constraint is decided per (p1,p2) by a greedy
  monotone rule: process OUT top to bottom and pick for each argument the
  topmost allowed IN attacker not above any earlier pick.  A selection
  without red crossings exists iff source positions can be chosen
  non-decreasing downward, and taking the smallest feasible position is
  always safe, so the greedy is exact.

Order-variable semantics: x_i_j = 1 means argument i is placed above
argument j.  Arguments carry 1-based global indices: IN first, then OUT,
then UNDEC, in layer order.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .heuristic import PipelineConfig, optimize_drawing
from .layout import (
    CrossingReport,
    EdgePartition,
    LayeredDrawing,
    count_crossings,
    weighted_objective_weight,
)

Layers = tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]


class SolveStatus(Enum):
    OPTIMAL = "OPTIMAL"
    TIMEOUT_BEST_KNOWN = "TIMEOUT_BEST_KNOWN"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class SolveResult:
    drawing: LayeredDrawing
    report: CrossingReport
    status: SolveStatus
    elapsed_ms: float
    nodes_explored: int


# ---------------------------------------------------------------------------
# 0-1 model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearConstraint:
    name: str
    terms: tuple[tuple[int, str], ...]
    sense: str  # one of "<=", ">=", "="
    rhs: int


@dataclass(frozen=True)
class IlpModel:
    order_vars: tuple[str, ...]
    crossing_vars: tuple[str, ...]
    red_vars: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, str], ...]
    layers: Layers


def _index_maps(layers: Layers) -> tuple[dict[str, int], list[str]]:
    """Global 1-based indices: IN block, then OUT, then UNDEC."""
    flat: list[str] = [a for layer in layers for a in layer]
    return {a: i for i, a in enumerate(flat, start=1)}, flat

_ARC_ORDERINGS = (
    (0, 2, 1, 3), (0, 3, 1, 2), (1, 2, 0, 3), (1, 3, 0, 2),
    (2, 0, 3, 1), (2, 1, 3, 0), (3, 0, 2, 1), (3, 1, 2, 0),
)  # the 8 endpoint orderings in which two arcs {0,1} and {2,3} interleave


def build_ilp(partition: EdgePartition, layers: Layers, rec: bool) -> IlpModel:
    """Construct the 0-1 crossing-minimization model.

    Crossing variables are created once per distinct endpoint quadruple;
    coincident parallel edges contribute through the objective coefficient
    (their crossings count per edge pair).  With rec=True, one totality
    equality is added per OUT argument that has IN attackers and one
    constraint per pair of IN->OUT edges whose endpoints all differ.
    """
    idx, _ = _index_maps(layers)
    in_set, out_set = set(layers[0]), set(layers[1])
    weight = weighted_objective_weight(partition)

    order_vars: list[str] = []
    layer_letter = {}
    for letter, layer in zip("xyz", layers):
        for a in layer:
            layer_letter[a] = letter
        for a, b in itertools.permutations(layer, 2):
            order_vars.append(f"{letter}_{idx[a]}_{idx[b]}")

    def ov(a: str, b: str) -> str:
        return f"{layer_letter[a]}_{idx[a]}_{idx[b]}"

    # normalized edge views per family: (left endpoint, right endpoint)
    def normalize_proper(edges, left_set):
        return [((s, t) if s in left_set else (t, s)) for s, t in edges]

    families: dict[int, list[tuple[str, str]]] = {
        1: normalize_proper(partition.e1, in_set),
        2: [(s, t) for s, t in partition.e2 if s != t],
        3: normalize_proper(partition.e3, out_set),
        4: [(s, t) for s, t in partition.e4 if s != t],
    }

    crossing_vars: list[str] = []
    objective: list[tuple[int, str]] = []
    constraints: list[LinearConstraint] = []
    cross_var_of: dict[tuple[int, frozenset[frozenset[str]]], str] = {}
    multiplicity: dict[str, int] = {}

    for n, edges in families.items():
        for e, f in itertools.combinations(edges, 2):
            if len({e[0], e[1], f[0], f[1]}) < 4:
                continue
            key = (n, frozenset((frozenset(e), frozenset(f))))
            if key in cross_var_of:
                multiplicity[cross_var_of[key]] += 1
                continue
            (i, j), (k, l) = e, f
            name = f"c_{n}_{idx[i]}_{idx[j]}_{idx[k]}_{idx[l]}"
            cross_var_of[key] = name
            multiplicity[name] = 1
            crossing_vars.append(name)
            if n in (1, 3):
                constraints.append(LinearConstraint(
                    f"{name}_a", ((1, ov(i, k)), (1, ov(l, j)), (-1, name)), "<=", 1))
                constraints.append(LinearConstraint(
                    f"{name}_b", ((1, ov(k, i)), (1, ov(j, l)), (-1, name)), "<=", 1))
            else:
                ends = (i, j, k, l)
                for m, (a, b, c, d) in enumerate(_ARC_ORDERINGS, start=1):
                    constraints.append(LinearConstraint(
                        f"{name}_p{m}",
                        ((1, ov(ends[a], ends[b])), (1, ov(ends[b], ends[c])),
                         (1, ov(ends[c], ends[d])), (-1, name)),
                        "<=", 2))

    for name in crossing_vars:
        fam = int(name.split("_")[1])
        objective.append((weight * multiplicity[name] if fam == 1 else multiplicity[name], name))

    red_vars: list[str] = []
    directed_e1 = [(s, t) for s, t in partition.e1 if s in in_set]
    if rec:
        by_target: dict[str, list[str]] = {}
        for s, t in directed_e1:
            by_target.setdefault(t, []).append(s)
            red_vars.append(f"r_{idx[s]}_{idx[t]}")
        for t in layers[1]:
            sources = by_target.get(t)
            if sources:
                constraints.append(LinearConstraint(
                    f"redtot_{idx[t]}",
                    tuple((1, f"r_{idx[s]}_{idx[t]}") for s in sources), "=", 1))
        for (s1, t1), (s2, t2) in itertools.combinations(directed_e1, 2):
            if len({s1, t1, s2, t2}) < 4:
                continue
            key = (1, frozenset((frozenset((s1, t1)), frozenset((s2, t2)))))
            cvar = cross_var_of[key]
            constraints.append(LinearConstraint(
                f"rec_{idx[s1]}_{idx[t1]}_{idx[s2]}_{idx[t2]}",
                ((1, f"r_{idx[s1]}_{idx[t1]}"), (1, f"r_{idx[s2]}_{idx[t2]}"), (1, cvar)),
                "<=", 2))

    for letter, layer in zip("xyz", layers):
        for a, b, c in itertools.combinations(layer, 3):
            expr = ((1, ov(a, b)), (1, ov(b, c)), (-1, ov(a, c)))
            base = f"trans_{letter}_{idx[a]}_{idx[b]}_{idx[c]}"
            constraints.append(LinearConstraint(f"{base}_ub", expr, "<=", 1))
            constraints.append(LinearConstraint(f"{base}_lb", expr, ">=", 0))
    for letter, layer in zip("xyz", layers):
        for a, b in itertools.combinations(layer, 2):
            constraints.append(LinearConstraint(
                f"asym_{letter}_{idx[a]}_{idx[b]}",
                ((1, ov(a, b)), (1, ov(b, a))), "=", 1))

    return IlpModel(
        order_vars=tuple(order_vars),
        crossing_vars=tuple(crossing_vars),
        red_vars=tuple(red_vars),
        constraints=tuple(constraints),
        objective=tuple(objective),
        layers=layers,
    )


def _format_terms(terms: tuple[tuple[int, str], ...]) -> str:
    parts: list[str] = []
    for coef, var in terms:
        sign = "-" if coef < 0 else "+"
        if not parts and sign == "+":
            parts.append(f"{abs(coef)} {var}")
        else:
            parts.append(f"{sign} {abs(coef)} {var}")
    return " ".join(parts)


def emit_lp(model: IlpModel) -> str:
    """Deterministic LP-format text; layer ids ride along as comments."""
    lines: list[str] = []
    for tag, layer in zip(("in", "out", "undec"), model.layers):
        lines.append("\\ layer " + tag + ":" + ("" if not layer else " " + " ".join(layer)))
    lines.append("Minimize")
    lines.append(" obj: " + _format_terms(model.objective) if model.objective else " obj:")
    lines.append("Subject To")
    for con in model.constraints:
        lines.append(f" {con.name}: {_format_terms(con.terms)} {con.sense} {con.rhs}")
    lines.append("Binaries")
    for var in model.order_vars + model.crossing_vars + model.red_vars:
        lines.append(f" {var}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> IlpModel:
    """Parse text produced by emit_lp back into an identical model."""
    layers: dict[str, tuple[str, ...]] = {"in": (), "out": (), "undec": ()}
    objective: list[tuple[int, str]] = []
    constraints: list[LinearConstraint] = []
    binaries: list[str] = []
    section = ""
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if raw.startswith("\\"):
            body = raw[1:].strip()
            if body.startswith("layer "):
                tag, _, ids = body[len("layer "):].partition(":")
                layers[tag.strip()] = tuple(ids.split())
            continue
        if line in ("Minimize", "Subject To", "Binaries", "End"):
            section = line
            continue
        if section == "Minimize":
            _, _, expr = line.partition(":")
            objective = _parse_terms(expr)
        elif section == "Subject To":
            name, _, body = line.partition(":")
            tokens = body.split()
            sense_at = next(i for i, t in enumerate(tokens) if t in ("<=", ">=", "="))
            terms = _parse_terms(" ".join(tokens[:sense_at]))
            constraints.append(LinearConstraint(
                name.strip(), tuple(terms), tokens[sense_at], int(tokens[sense_at + 1])))
        elif section == "Binaries":
            binaries.append(line)
    order_vars = tuple(v for v in binaries if v[0] in "xyz")
    crossing_vars = tuple(v for v in binaries if v.startswith("c_"))
    red_vars = tuple(v for v in binaries if v.startswith("r_"))
    return IlpModel(
        order_vars=order_vars,
        crossing_vars=crossing_vars,
        red_vars=red_vars,
        constraints=tuple(constraints),
        objective=tuple(objective),
        layers=(layers["in"], layers["out"], layers["undec"]),
    )


def _parse_terms(expr: str) -> list[tuple[int, str]]:
    tokens = expr.split()
    terms: list[tuple[int, str]] = []
    sign = 1
    k = 0
    while k < len(tokens):
        tok = tokens[k]
        if tok == "+":
            sign = 1
        elif tok == "-":
            sign = -1
        else:
            terms.append((sign * int(tok), tokens[k + 1]))
            sign = 1
            k += 1
        k += 1
    return terms


def assignment_from_drawing(model: IlpModel, drawing: LayeredDrawing) -> dict[str, int]:
    """0/1 values realizing a drawing: order variables from positions,
    crossing variables at their geometric truth, red variables from the
    drawing's red edges."""
    idx, flat = _index_maps(model.layers)
    pos: dict[str, int] = {}
    for order in (drawing.in_order, drawing.out_order, drawing.undec_order):
        for p, a in enumerate(order):
            pos[a] = p
    by_index = {idx[a]: a for a in flat}
    values: dict[str, int] = {}
    for var in model.order_vars:
        _, i, j = var.split("_")
        values[var] = int(pos[by_index[int(i)]] < pos[by_index[int(j)]])
    for var in model.crossing_vars:
        _, fam, i, j, k, l = var.split("_")
        pi, pj = pos[by_index[int(i)]], pos[by_index[int(j)]]
        pk, pl = pos[by_index[int(k)]], pos[by_index[int(l)]]
        if fam in ("1", "3"):
            values[var] = int((pi - pk) * (pj - pl) < 0)
        else:
            a, b = sorted((pi, pj))
            c, d = sorted((pk, pl))
            values[var] = int((a < c < b < d) or (c < a < d < b))
    for var in model.red_vars:
        _, i, j = var.split("_")
        values[var] = int(drawing.red_edges.get(by_index[int(j)]) == by_index[int(i)])
    return values


def objective_value(model: IlpModel, values: dict[str, int]) -> int:
    return sum(coef * values[var] for coef, var in model.objective)


def violated_constraints(model: IlpModel, values: dict[str, int]) -> list[str]:
    bad: list[str] = []
    for con in model.constraints:
        lhs = sum(coef * values[var] for coef, var in con.terms)
        ok = lhs <= con.rhs if con.sense == "<=" else lhs >= con.rhs if con.sense == ">=" else lhs == con.rhs
        if not ok:
            bad.append(con.name)
    return bad


def drawing_from_solution(model: IlpModel, solution_text: str) -> LayeredDrawing:
    """Rebuild a drawing from 'variable value' lines of a solver solution.

    An argument's position is the count of arguments ordered before it.
    Red edges come from r variables at one; unlisted variables default to 0.
    """
    values: dict[str, int] = {}
    for raw in solution_text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("\\"):
            continue
        name, _, val = line.partition(" ")
        values[name] = int(round(float(val)))
    idx, flat = _index_maps(model.layers)
    by_index = {idx[a]: a for a in flat}
    orders: list[tuple[str, ...]] = []
    for letter, layer in zip("xyz", model.layers):
        position: dict[str, int] = {}
        for a in layer:
            position[a] = sum(
                values.get(f"{letter}_{idx[b]}_{idx[a]}", 0) for b in layer if b != a)
        if sorted(position.values()) != list(range(len(layer))):
            raise ValueError(f"order variables for layer {letter!r} do not form a permutation")
        orders.append(tuple(sorted(layer, key=position.__getitem__)))
    reds: dict[str, str] = {}
    for var in model.red_vars:
        if values.get(var, 0) == 1:
            _, i, j = var.split("_")
            reds[by_index[int(j)]] = by_index[int(i)]
    return LayeredDrawing(orders[0], orders[1], orders[2], reds)


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------


class _Timeout(Exception):
    pass


class _Search:
    """Single-threaded branch-and-bound state.  Local integer indices per
    layer; positions grow downward; -1 means unplaced."""

    def __init__(self, partition: EdgePartition, layers: Layers, rec: bool,
                 deadline: float | None):
        self.rec = rec
        self.deadline = deadline
        self.nodes = 0
        in_ids, out_ids, undec_ids = layers
        self.layers = layers
        self.weight = weighted_objective_weight(partition)
        iin = {a: i for i, a in enumerate(in_ids)}
        iout = {a: i for i, a in enumerate(out_ids)}
        iundec = {a: i for i, a in enumerate(undec_ids)}

        self.e1 = []
        for s, t in partition.e1:
            self.e1.append((iin[s], iout[t], True) if s in iin else ((iin[t], iout[s], False)))
        self.arcs2 = [(iout[s], iout[t]) for s, t in partition.e2 if s != t]
        self.e3 = []
        for s, t in partition.e3:
            self.e3.append((iout[s], iundec[t]) if s in iout else (iout[t], iundec[s]))
        self.arcs4 = [(iundec[s], iundec[t]) for s, t in partition.e4 if s != t]

        self.n1, self.n2, self.n3 = len(in_ids), len(out_ids), len(undec_ids)
        self.e1_of_in: list[list[int]] = [[] for _ in range(self.n1)]
        self.e1_of_out: list[list[int]] = [[] for _ in range(self.n2)]
        for e, (u, x, _) in enumerate(self.e1):
            self.e1_of_in[u].append(e)
            self.e1_of_out[x].append(e)
        self.arcs2_of: list[list[int]] = [[] for _ in range(self.n2)]
        for p, (a, b) in enumerate(self.arcs2):
            self.arcs2_of[a].append(p)
            self.arcs2_of[b].append(p)
        self.e3_of_undec: list[list[int]] = [[] for _ in range(self.n3)]
        for e, (x, u) in enumerate(self.e3):
            self.e3_of_undec[u].append(e)
        self.arcs4_of: list[list[int]] = [[] for _ in range(self.n3)]
        for p, (a, b) in enumerate(self.arcs4):
            self.arcs4_of[a].append(p)
            self.arcs4_of[b].append(p)

        self.red_cands: list[list[int]] = [[] for _ in range(self.n2)]
        for u, x, directed in self.e1:
            if directed and u not in self.red_cands[x]:
                self.red_cands[x].append(u)
        for cands in self.red_cands:
            cands.sort()

        # arguments with no counted edge can sit at the bottom, untouched
        deg1 = [0] * self.n1
        deg2 = [0] * self.n2
        deg3 = [0] * self.n3
        for u, x, _ in self.e1:
            deg1[u] += 1
            deg2[x] += 1
        for a, b in self.arcs2:
            deg2[a] += 1
            deg2[b] += 1
        for x, u in self.e3:
            deg2[x] += 1
            deg3[u] += 1
        for a, b in self.arcs4:
            deg3[a] += 1
            deg3[b] += 1
        self.active1 = [i for i in range(self.n1) if deg1[i]]
        self.active2 = [i for i in range(self.n2) if deg2[i]]
        self.active3 = [i for i in range(self.n3) if deg3[i]]

        self.pos1 = [-1] * self.n1
        self.pos2 = [-1] * self.n2
        self.placed1: list[int] = []
        self.placed2: list[int] = []
        self.fixed = 0  # weighted cost of fully determined crossings
        self.red_choice: dict[int, int] = {}
        self.must_precede: list[list[int]] = [[] for _ in range(self.n1)]

        # pairwise-min refinement, armed once the opposite layer completes
        self.pair_min: list[list[int]] | None = None  # over OUT pairs, unweighted
        self.pair_residual = 0

        self.best_obj: int | None = None
        self.best: tuple[list[int], list[int], list[int], dict[int, int]] | None = None
        self.undec_memo: dict[tuple[int, ...], tuple[int, list[int]]] = {}

    # -- plumbing ----------------------------------------------------------

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                raise _Timeout

    def _record(self, total: int, undec_order: list[int]) -> None:
        self.best_obj = total
        self.best = (list(self.placed1), list(self.placed2), list(undec_order),
                     dict(self.red_choice))

    # -- crossing deltas ----------------------------------------------------

    def _delta_in(self, a: int) -> int:
        """Crossings newly determined by placing IN argument a (unweighted)."""
        delta = 0
        pos1, pos2 = self.pos1, self.pos2
        for e in self.e1_of_in[a]:
            _, x, _ = self.e1[e]
            px = pos2[x]
            for v, y, _ in self.e1:
                if v == a or pos1[v] != -1 or x == y:
                    continue
                # a is above v; crossing iff x is below y
                py = pos2[y]
                if px == -1:
                    if py == -1:
                        continue  # OUT side still open
                    delta += 1  # x unplaced -> below placed y
                elif py != -1 and px > py:
                    delta += 1
        return delta

    def _delta_out_proper(self, t: int) -> int:
        """E1 crossings newly determined by placing OUT argument t."""
        delta = 0
        pos1, pos2 = self.pos1, self.pos2
        for e in self.e1_of_out[t]:
            u, _, _ = self.e1[e]
            pu = pos1[u]
            for v, y, _ in self.e1:
                if y == t or pos2[y] != -1 or u == v:
                    continue
                # t is above y; crossing iff u is below v
                pv = pos1[v]
                if pu == -1:
                    if pv == -1:
                        continue
                    delta += 1  # u unplaced -> below placed v
                elif pv != -1 and pu > pv:
                    delta += 1
        return delta

    @staticmethod
    def _arc_delta(t: int, arcs, arcs_of, pos, next_pos: int) -> int:
        """Arc crossings newly determined by placing t at position next_pos.

        A pair is determined once at most one endpoint is unplaced: the
        straggler sits below everything placed, which fixes the interleaving
        truth.  The pairs settled by this placement are exactly those with
        one endpoint besides t still open; pairs that were already down to
        one open endpoint were counted when they got there.
        """
        delta = 0
        big = 1 << 20
        for p in arcs_of[t]:
            a, b = arcs[p]
            for q, (c, d) in enumerate(arcs):
                if q == p or len({a, b, c, d}) < 4:
                    continue
                open_before = sum(1 for v in (a, b, c, d) if pos[v] == -1 and v != t)
                if open_before != 1:
                    continue
                pa, pb, pc, pd = (
                    next_pos if v == t else (pos[v] if pos[v] != -1 else big)
                    for v in (a, b, c, d))
                lo1, hi1 = min(pa, pb), max(pa, pb)
                lo2, hi2 = min(pc, pd), max(pc, pd)
                if (lo1 < lo2 < hi1 < hi2) or (lo2 < lo1 < hi2 < hi1):
                    delta += 1
        return delta

    # -- pairwise-min bound --------------------------------------------------

    def _arm_pair_bound(self) -> None:
        """IN is complete: precompute min crossings per unplaced OUT pair."""
        unplaced = [x for x in self.active2 if self.pos2[x] == -1]
        pair_min = [[0] * self.n2 for _ in range(self.n2)]
        pos1 = self.pos1
        residual = 0
        for xi in range(len(unplaced)):
            x = unplaced[xi]
            for y in unplaced[xi + 1:]:
                above = below = 0  # crossings with x above y / y above x
                for e in self.e1_of_out[x]:
                    u = self.e1[e][0]
                    for f in self.e1_of_out[y]:
                        v = self.e1[f][0]
                        if u == v:
                            continue
                        if pos1[u] > pos1[v]:
                            above += 1
                        else:
                            below += 1
                m = min(above, below)
                pair_min[x][y] = pair_min[y][x] = m
                residual += m
        self.pair_min = pair_min
        self.pair_residual = residual

    # -- search --------------------------------------------------------------

    def run(self) -> None:
        self._descend()

    def _descend(self) -> None:
        p1, p2 = len(self.placed1), len(self.placed2)
        if p1 == len(self.active1) and p2 == len(self.active2):
            self._leaf()
            return
        place_in = p1 < len(self.active1) and (p1 <= p2 or p2 == len(self.active2))
        if place_in:
            self._branch_in()
        else:
            self._branch_out()

    def _branch_in(self) -> None:
        for a in self.active1:
            if self.pos1[a] != -1:
                continue
            if any(self.pos1[v] == -1 for v in self.must_precede[a]):
                continue  # a red edge above would cross; prune
            self._tick()
            delta = self._delta_in(a)
            self.pos1[a] = len(self.placed1)
            self.placed1.append(a)
            self.fixed += self.weight * delta
            armed_here = False
            if self.pair_min is None and len(self.placed1) == len(self.active1):
                self._arm_pair_bound()
                armed_here = True
            bound = self.fixed + self.weight * self.pair_residual
            if self.best_obj is None or bound < self.best_obj:
                self._descend()
            if armed_here:
                self.pair_min = None
                self.pair_residual = 0
            self.fixed -= self.weight * delta
            self.placed1.pop()
            self.pos1[a] = -1

    def _branch_out(self) -> None:
        for t in self.active2:
            if self.pos2[t] != -1:
                continue
            if self.rec:
                for u in self.red_cands[t]:
                    self._try_out(t, u)
            else:
                self._try_out(t, None)

    def _try_out(self, t: int, red: int | None) -> None:
        # check the new red edge against all earlier ones before any work
        added_precede: list[int] = []
        if red is not None:
            pr = self.pos1[red]
            for s, v in self.red_choice.items():
                if v == red:
                    continue
                pv = self.pos1[v]
                if pv != -1 and pr != -1:
                    if pv > pr:
                        return  # upper red source below lower one: crossing
                elif pv == -1 and pr != -1:
                    return  # v will land below red: crossing
                elif pv == -1 and pr == -1:
                    self.must_precede[red].append(v)
                    added_precede.append(red)
        self._tick()
        delta = self._delta_out_proper(t) * self.weight
        delta += self._arc_delta(t, self.arcs2, self.arcs2_of, self.pos2, len(self.placed2))
        self.pos2[t] = len(self.placed2)
        self.placed2.append(t)
        self.fixed += delta
        residual_cut = 0
        if self.pair_min is not None:
            row = self.pair_min[t]
            residual_cut = sum(row[y] for y in self.active2 if self.pos2[y] == -1)
            self.pair_residual -= residual_cut
        if red is not None:
            self.red_choice[t] = red
        bound = self.fixed + self.weight * self.pair_residual
        if self.best_obj is None or bound < self.best_obj:
            self._descend()
        if red is not None:
            del self.red_choice[t]
        self.pair_residual += residual_cut
        self.fixed -= delta
        self.placed2.pop()
        self.pos2[t] = -1
        for u in added_precede:
            self.must_precede[u].pop()

    def _leaf(self) -> None:
        c34, undec = self._solve_undec()
        total = self.fixed + c34
        if self.best_obj is None or total < self.best_obj:
            self._record(total, undec)

    # -- UNDEC phase ----------------------------------------------------------

    def _solve_undec(self) -> tuple[int, list[int]]:
        if not self.active3:
            return 0, []
        key = tuple(self.placed2)
        hit = self.undec_memo.get(key)
        if hit is not None:
            return hit
        # pairwise E3 crossing counts for the now-fixed OUT order
        n3 = self.n3
        c3p = [[0] * n3 for _ in range(n3)]
        pos2 = self.pos2
        for p in self.active3:
            for q in self.active3:
                if p == q:
                    continue
                cnt = 0
                for e in self.e3_of_undec[p]:
                    xe = self.e3[e][0]
                    for f in self.e3_of_undec[q]:
                        xf = self.e3[f][0]
                        if xe != xf and pos2[xe] > pos2[xf]:
                            cnt += 1
                c3p[p][q] = cnt  # crossings with p above q

        def eval_order(order: list[int]) -> int:
            total = 0
            for i in range(len(order)):
                for j in range(i + 1, len(order)):
                    total += c3p[order[i]][order[j]]
            for p, q in itertools.combinations(range(len(self.arcs4)), 2):
                a, b = self.arcs4[p]
                c, d = self.arcs4[q]
                if len({a, b, c, d}) < 4:
                    continue
                pa = {v: order.index(v) for v in (a, b, c, d)}
                lo1, hi1 = sorted((pa[a], pa[b]))
                lo2, hi2 = sorted((pa[c], pa[d]))
                if (lo1 < lo2 < hi1 < hi2) or (lo2 < lo1 < hi2 < hi1):
                    total += 1
            return total

        incumbent = list(self.active3)
        inc_cost = eval_order(incumbent)
        sub = _UndecSearch(self, c3p, incumbent, inc_cost)
        cost, order = sub.run()
        result = (cost, order)
        self.undec_memo[key] = result
        return result


class _UndecSearch:
    """Inner branch-and-bound over UNDEC placements for one fixed OUT order."""

    def __init__(self, outer: _Search, c3p: list[list[int]], incumbent: list[int],
                 inc_cost: int):
        self.o = outer
        self.c3p = c3p
        self.best = list(incumbent)
        self.best_cost = inc_cost
        self.pos = [-1] * outer.n3
        self.placed: list[int] = []
        self.fixed = 0
        self.residual = 0
        pairs_min = 0
        for i, p in enumerate(outer.active3):
            for q in outer.active3[i + 1:]:
                pairs_min += min(c3p[p][q], c3p[q][p])
        self.residual = pairs_min

    def run(self) -> tuple[int, list[int]]:
        self._descend()
        return self.best_cost, self.best

    def _descend(self) -> None:
        o = self.o
        if len(self.placed) == len(o.active3):
            if self.fixed < self.best_cost:
                self.best_cost = self.fixed
                self.best = list(self.placed)
            return
        for w in o.active3:
            if self.pos[w] != -1:
                continue
            o._tick()
            delta = sum(self.c3p[w][v] for v in o.active3 if self.pos[v] == -1 and v != w)
            delta += o._arc_delta(w, o.arcs4, o.arcs4_of, self.pos, len(self.placed))
            cut = sum(min(self.c3p[w][v], self.c3p[v][w])
                      for v in o.active3 if self.pos[v] == -1 and v != w)
            self.pos[w] = len(self.placed)
            self.placed.append(w)
            self.fixed += delta
            self.residual -= cut
            if self.fixed + self.residual < self.best_cost:
                self._descend()
            self.residual += cut
            self.fixed -= delta
            self.placed.pop()
            self.pos[w] = -1


def _ids_from_local(layer_ids: tuple[str, ...], placed: list[int]) -> tuple[str, ...]:
    chosen = [layer_ids[i] for i in placed]
    rest = [layer_ids[i] for i in range(len(layer_ids)) if i not in set(placed)]
    return tuple(chosen + rest)


def _fallback_reds(partition: EdgePartition, in_order: tuple[str, ...],
                   out_order: tuple[str, ...]) -> dict[str, str]:
    """Topmost IN attacker per OUT argument; partial when none exists."""
    in_pos = {a: i for i, a in enumerate(in_order)}
    reds: dict[str, str] = {}
    for s, t in partition.e1:
        if s in in_pos and (t not in reds or in_pos[s] < in_pos[reds[t]]):
            reds[t] = s
    return {t: reds[t] for t in out_order if t in reds}


def solve_exact(
    partition: EdgePartition,
    layers: Layers,
    rec: bool,
    timeout_ms: int | None = None,
) -> SolveResult:
    """Branch-and-bound to a proven optimum of the weighted objective.

    Returns OPTIMAL with the minimizing drawing, TIMEOUT_BEST_KNOWN with the
    incumbent when the deadline expires, or INFEASIBLE when rec=True and
    some OUT argument has no IN attacker.
    """
    start = time.monotonic()
    in_ids, out_ids, undec_ids = layers
    deadline = start + timeout_ms / 1000.0 if timeout_ms else None

    in_set = set(in_ids)
    covered = {t for s, t in partition.e1 if s in in_set}
    uncovered = [t for t in out_ids if t not in covered]
    if rec and uncovered:
        drawing = LayeredDrawing(in_ids, out_ids, undec_ids,
                                 _fallback_reds(partition, in_ids, out_ids))
        return SolveResult(
            drawing=drawing,
            report=count_crossings(drawing, partition),
            status=SolveStatus.INFEASIBLE,
            elapsed_ms=(time.monotonic() - start) * 1000.0,
            nodes_explored=0,
        )

    identity = LayeredDrawing(in_ids, out_ids, undec_ids, {})
    if not uncovered:
        incumbent, inc_report = optimize_drawing(identity, partition, PipelineConfig())
    else:
        incumbent = replace(identity, red_edges=_fallback_reds(partition, in_ids, out_ids))
        inc_report = count_crossings(incumbent, partition)

    search = _Search(partition, layers, rec, deadline)
    search.best_obj = inc_report.weighted_objective
    status = SolveStatus.OPTIMAL
    try:
        search.run()
    except _Timeout:
        status = SolveStatus.TIMEOUT_BEST_KNOWN

    if search.best is None:
        drawing = incumbent
    else:
        placed1, placed2, undec, red_choice = search.best
        in_order = _ids_from_local(in_ids, placed1)
        out_order = _ids_from_local(out_ids, placed2)
        undec_order = _ids_from_local(undec_ids, undec)
        if rec:
            reds = {out_ids[t]: in_ids[u] for t, u in red_choice.items()}
        else:
            reds = _fallback_reds(partition, in_order, out_order)
        drawing = LayeredDrawing(in_order, out_order, undec_order, reds)

    return SolveResult(
        drawing=drawing,
        report=count_crossings(drawing, partition),
        status=status,
        elapsed_ms=(time.monotonic() - start) * 1000.0,
        nodes_explored=search.nodes,
    )


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

_ORACLE_LAYER_LIMIT = 7
_ORACLE_RED_COMBO_LIMIT = 10_000


@lru_cache(maxsize=16)
def _perm_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n == 0:
        empty = np.zeros((1, 0), dtype=np.int64)
        return empty, empty
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return perms, np.argsort(perms, axis=1)


def _pair_sign_matrix(pos: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.sign(pos[:, left] - pos[:, right]).astype(np.int8)


def _proper_cross_matrix(pos_l: np.ndarray, pos_r: np.ndarray,
                         ends_l: list[int], ends_r: list[int]) -> np.ndarray:
    m_l, m_r = pos_l.shape[0], pos_r.shape[0]
    n_edges = len(ends_l)
    if n_edges < 2:
        return np.zeros((m_l, m_r), dtype=np.int64)
    ia, ib = np.triu_indices(n_edges, k=1)
    el = np.asarray(ends_l)
    er = np.asarray(ends_r)
    a = _pair_sign_matrix(pos_l, el[ia], el[ib]).astype(np.int32)
    b = _pair_sign_matrix(pos_r, er[ia], er[ib]).astype(np.int32)
    s = a @ b.T
    n = np.abs(a) @ np.abs(b).T
    return ((n - s) // 2).astype(np.int64)


def _arc_cross_vector(pos: np.ndarray, arcs: list[tuple[int, int]]) -> np.ndarray:
    m = pos.shape[0]
    if len(arcs) < 2:
        return np.zeros(m, dtype=np.int64)
    a = pos[:, [p for p, _ in arcs]]
    b = pos[:, [q for _, q in arcs]]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    total = np.zeros(m, dtype=np.int64)
    for p in range(len(arcs)):
        lop = lo[:, p:p + 1]
        hip = hi[:, p:p + 1]
        total += ((lop < lo) & (lo < hip) & (hip < hi)).sum(axis=1)
    return total


def _greedy_rec_feasible(pos1_row: np.ndarray, out_perm: np.ndarray,
                         cands: list[list[int]]) -> dict[int, int] | None:
    """Scalar greedy witness for one (IN, OUT) permutation pair, or None."""
    floor = 0
    chosen: dict[int, int] = {}
    for t in out_perm:
        best_pos, best_u = None, None
        for u in cands[t]:
            p = pos1_row[u]
            if p >= floor and (best_pos is None or p < best_pos):
                best_pos, best_u = p, u
        if best_u is None:
            return None
        chosen[int(t)] = int(best_u)
        floor = int(best_pos)
    return chosen


def brute_force_oracle(partition: EdgePartition, layers: Layers, rec: bool) -> SolveResult:
    """Exhaustive minimum over all layer permutations (and red selections).

    Refuses layers above 7 arguments; with rec=True the product of red
    candidate counts must not exceed 10^4.
    """
    start = time.monotonic()
    in_ids, out_ids, undec_ids = layers
    n1, n2, n3 = len(in_ids), len(out_ids), len(undec_ids)
    if max(n1, n2, n3) > _ORACLE_LAYER_LIMIT:
        raise ValueError(f"instance too large for the oracle (layer > {_ORACLE_LAYER_LIMIT})")

    iin = {a: i for i, a in enumerate(in_ids)}
    iout = {a: i for i, a in enumerate(out_ids)}
    iundec = {a: i for i, a in enumerate(undec_ids)}
    e1 = [((iin[s], iout[t]) if s in iin else (iin[t], iout[s])) for s, t in partition.e1]
    directed = [(iin[s], iout[t]) for s, t in partition.e1 if s in iin]
    cands: list[list[int]] = [[] for _ in range(n2)]
    for u, x in directed:
        if u not in cands[x]:
            cands[x].append(u)
    if rec:
        combos = 1
        for t in range(n2):
            combos *= max(len(cands[t]), 1)
            if combos > _ORACLE_RED_COMBO_LIMIT:
                raise ValueError("instance too large for the oracle (red combinations)")
        if any(not cands[t] for t in range(n2)):
            drawing = LayeredDrawing(in_ids, out_ids, undec_ids,
                                     _fallback_reds(partition, in_ids, out_ids))
            return SolveResult(drawing, count_crossings(drawing, partition),
                               SolveStatus.INFEASIBLE,
                               (time.monotonic() - start) * 1000.0, 0)

    arcs2 = [(iout[s], iout[t]) for s, t in partition.e2 if s != t]
    e3 = [((iout[s], iundec[t]) if s in iout else (iout[t], iundec[s])) for s, t in partition.e3]
    arcs4 = [(iundec[s], iundec[t]) for s, t in partition.e4 if s != t]

    perms1, pos1 = _perm_tables(n1)
    perms2, pos2 = _perm_tables(n2)
    perms3, pos3 = _perm_tables(n3)
    weight = weighted_objective_weight(partition)

    c1 = _proper_cross_matrix(pos1, pos2, [u for u, _ in e1], [x for _, x in e1])
    c2 = _arc_cross_vector(pos2, arcs2)
    c3 = _proper_cross_matrix(pos2, pos3, [x for x, _ in e3], [u for _, u in e3])
    c4 = _arc_cross_vector(pos3, arcs4)

    big = np.int64(1) << 40
    w_c1 = weight * c1
    if rec:
        feasible = np.zeros((pos1.shape[0], pos2.shape[0]), dtype=bool)
        for j in range(perms2.shape[0]):
            floor = np.zeros(pos1.shape[0], dtype=np.int64)
            ok = np.ones(pos1.shape[0], dtype=bool)
            for t in perms2[j]:
                p = pos1[:, cands[t]]
                masked = np.where(p >= floor[:, None], p, big)
                new_floor = masked.min(axis=1)
                ok &= new_floor < big
                floor = np.where(ok, new_floor, floor)
            feasible[:, j] = ok
        w_c1 = np.where(feasible, w_c1, big)

    best1_per_out = w_c1.min(axis=0)
    arg1_per_out = w_c1.argmin(axis=0)
    c34 = c3 + c4[None, :]
    best34_per_out = c34.min(axis=1)
    arg34_per_out = c34.argmin(axis=1)

    totals = best1_per_out + c2 + best34_per_out
    j = int(totals.argmin())
    i = int(arg1_per_out[j])
    k = int(arg34_per_out[j])

    in_order = tuple(in_ids[v] for v in perms1[i])
    out_order = tuple(out_ids[v] for v in perms2[j])
    undec_order = tuple(undec_ids[v] for v in perms3[k])
    if rec:
        witness = _greedy_rec_feasible(pos1[i], perms2[j], cands)
        assert witness is not None
        reds = {out_ids[t]: in_ids[u] for t, u in witness.items()}
    else:
        reds = _fallback_reds(partition, in_order, out_order)
    drawing = LayeredDrawing(in_order, out_order, undec_order, reds)
    report = count_crossings(drawing, partition)
    nodes = pos1.shape[0] * pos2.shape[0] + pos2.shape[0] * pos3.shape[0]
    return SolveResult(drawing, report, SolveStatus.OPTIMAL,
                       (time.monotonic() - start) * 1000.0, nodes)
