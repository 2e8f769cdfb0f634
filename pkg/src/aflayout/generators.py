"""Instance generators for tests, demos, and benchmarks.

Two structured families with known optimum behavior:

* rec_neutral_family: a stable extension {u, v} whose other arguments have
  degree 1 or 2.  Every pair of degree-2 arguments crosses exactly once in
  any order, degree-1 arguments can always be tucked away for free, and a
  red selection compatible with any optimal order exists, so the optimum
  is k*(k-1)/2 with or without the red-edge constraint.
* rec_penalty_family: a stable extension {u, v, w} where one argument (b)
  is attacked only by v while attacking u, and another (a) is attacked
  only by u while attacking w.  Their red edges are forced, which pins a
  above b in any red-feasible order; every unconstrained optimum needs a
  strictly between the two degree-2 groups, so the constrained optimum is
  at least one crossing worse.

Both families randomize only padding counts and id order, never the shape
that the guarantees rest on.
"""

from __future__ import annotations

import random

from .af import ArgumentationFramework, Label, LayerAssignment, compute_labeling
from .layout import EdgePartition, partition_edges

Layers = tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]


def random_af(n_args: int, n_attacks: int, seed: int,
              allow_self_attacks: bool = True) -> ArgumentationFramework:
    """Uniform random framework with exactly min(n_attacks, possible) attacks."""
    rng = random.Random(seed)
    args = tuple(f"a{i}" for i in range(1, n_args + 1))
    pool = [(s, t) for s in args for t in args if allow_self_attacks or s != t]
    n_attacks = min(n_attacks, len(pool))
    attacks = tuple(rng.sample(pool, n_attacks))
    return ArgumentationFramework(args, attacks)


def random_layered_instance(
    seed: int,
    max_layer: int = 6,
    max_attacks: int = 18,
    ensure_covered: bool = False,
) -> tuple[ArgumentationFramework, LayerAssignment, EdgePartition, Layers]:
    """Random labeled instance for layout-level testing.

    Labels are assigned directly rather than derived from semantics, so all
    six edge classes can occur.  With ensure_covered every rejected
    argument gets at least one accepted attacker, which red selection and
    the constrained solvers require.
    """
    rng = random.Random(seed)
    n1 = rng.randint(0, max_layer)
    n2 = rng.randint(0, max_layer)
    n3 = rng.randint(0, max_layer)
    if n1 + n2 + n3 == 0:
        n1 = 1
    if ensure_covered and n2 and not n1:
        n1 = 1
    in_ids = tuple(f"i{k}" for k in range(1, n1 + 1))
    out_ids = tuple(f"o{k}" for k in range(1, n2 + 1))
    undec_ids = tuple(f"u{k}" for k in range(1, n3 + 1))
    args = in_ids + out_ids + undec_ids
    label: dict[str, Label] = {}
    for a in in_ids:
        label[a] = Label.IN
    for a in out_ids:
        label[a] = Label.OUT
    for a in undec_ids:
        label[a] = Label.UNDEC
    pool = [(s, t) for s in args for t in args if not (s == t and label[s] is Label.IN)]
    m = rng.randint(0, min(max_attacks, len(pool)))
    attacks = list(rng.sample(pool, m))
    if ensure_covered:
        covered = {t for s, t in attacks if s in in_ids}
        attacks += [(rng.choice(in_ids), t) for t in out_ids if t not in covered]
    af = ArgumentationFramework(args, tuple(attacks))
    labeling = LayerAssignment(label)
    partition = partition_edges(af, labeling)
    return af, labeling, partition, (in_ids, out_ids, undec_ids)


def rec_neutral_family(
    k: int,
    pad_u: int,
    pad_v: int,
    seed: int = 0,
) -> tuple[ArgumentationFramework, tuple[str, ...]]:
    """Stable two-argument extension; optimum k*(k-1)/2 with or without
    the red-edge constraint.

    k degree-2 arguments are attacked by both u and v (one attack may be
    flipped outgoing at random, keeping at least one incoming); pad_u and
    pad_v degree-1 arguments hang off one source each.
    """
    if k < 0 or pad_u < 0 or pad_v < 0:
        raise ValueError("counts must be non-negative")
    rng = random.Random(seed)
    args: list[str] = ["u", "v"]
    attacks: list[tuple[str, str]] = []
    for i in range(1, k + 1):
        d = f"d{i}"
        args.append(d)
        flip = rng.randrange(3)  # 0: both incoming, 1: attacks u, 2: attacks v
        attacks.append((d, "u") if flip == 1 else ("u", d))
        attacks.append((d, "v") if flip == 2 else ("v", d))
    for i in range(1, pad_u + 1):
        args.append(f"p{i}")
        attacks.append(("u", f"p{i}"))
    for i in range(1, pad_v + 1):
        args.append(f"q{i}")
        attacks.append(("v", f"q{i}"))
    return ArgumentationFramework(tuple(args), tuple(attacks)), ("u", "v")


def rec_penalty_family(
    k_uv: int = 2,
    k_vw: int = 2,
    pad_u: int = 1,
    pad_v: int = 1,
    pad_w: int = 1,
) -> tuple[ArgumentationFramework, tuple[str, ...]]:
    """Stable three-argument extension where the red-edge constraint costs
    at least one extra crossing.

    Groups: k_uv arguments adjacent to u and v (one of them, b, is attacked
    only by v and attacks u, forcing its red edge to come from v); k_vw
    arguments adjacent to v and w; a single bridge argument a attacked only
    by u and attacking w, forcing its red edge to come from u.  Paddings
    are degree-1 targets of one source each.
    """
    if k_uv < 2 or k_vw < 2:
        raise ValueError("both degree-2 groups need at least two members")
    if min(pad_u, pad_v, pad_w) < 0:
        raise ValueError("padding counts must be non-negative")
    args: list[str] = ["u", "v", "w"]
    attacks: list[tuple[str, str]] = []
    args.append("b")
    attacks += [("v", "b"), ("b", "u")]
    for i in range(1, k_uv):
        c = f"c{i}"
        args.append(c)
        attacks += [("u", c), ("v", c)]
    for i in range(1, k_vw + 1):
        d = f"d{i}"
        args.append(d)
        attacks += [("v", d), ("w", d)]
    args.append("a")
    attacks += [("u", "a"), ("a", "w")]
    for source, count, prefix in (("u", pad_u, "pu"), ("v", pad_v, "pv"), ("w", pad_w, "pw")):
        for i in range(1, count + 1):
            p = f"{prefix}{i}"
            args.append(p)
            attacks.append((source, p))
    return ArgumentationFramework(tuple(args), tuple(attacks)), ("u", "v", "w")


def layers_for(af: ArgumentationFramework, extension: tuple[str, ...]) -> Layers:
    """Layer id tuples (declaration order) for an extension of af."""
    labeling = compute_labeling(af, frozenset(extension))
    return (labeling.in_args, labeling.out_args, labeling.undec_args)
