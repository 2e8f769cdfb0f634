"""Argumentation frameworks: model, file formats, labelings, semantics.

An argumentation framework is a finite directed graph whose vertices are
arguments and whose edges are attacks.  Given an extension (a set of
accepted arguments) every argument gets exactly one of three labels:

    IN     member of the extension
    OUT    attacked by some IN argument
    UNDEC  neither

Supported file formats: ICCMA23 (`p af n` header plus index pairs), APX
(`arg(x).` / `att(x,y).` facts) and TGF (node lines, `#`, edge lines).
Parsing and serialization round-trip bit-exactly for ICCMA23 and APX.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property


class ParseError(ValueError):
    """Raised on malformed instance or extension input; message carries the line number."""


class SemanticsError(ValueError):
    """Raised when an extension violates a required semantic property."""


class Label(Enum):
    IN = "IN"
    OUT = "OUT"
    UNDEC = "UNDEC"


@dataclass(frozen=True)
class ArgumentationFramework:
    """Immutable attack graph.

    ``arguments`` keeps declaration order; ``attacks`` keeps first-appearance
    order with duplicates collapsed.  Self-attacks are legal.
    """

    arguments: tuple[str, ...]
    attacks: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for a in self.arguments:
            if not a:
                raise ValueError("empty argument id")
            if a in seen:
                raise ValueError(f"duplicate argument id {a!r}")
            seen.add(a)
        deduped: list[tuple[str, str]] = []
        edge_seen: set[tuple[str, str]] = set()
        for src, tgt in self.attacks:
            if src not in seen or tgt not in seen:
                raise ValueError(f"attack ({src!r}, {tgt!r}) references an undeclared argument")
            if (src, tgt) not in edge_seen:
                edge_seen.add((src, tgt))
                deduped.append((src, tgt))
        object.__setattr__(self, "attacks", tuple(deduped))

    @cached_property
    def attack_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.attacks)

    @cached_property
    def attackers(self) -> dict[str, tuple[str, ...]]:
        """Map target -> attackers, both in declaration order."""
        acc: dict[str, list[str]] = {a: [] for a in self.arguments}
        for src, tgt in self.attacks:
            acc[tgt].append(src)
        return {a: tuple(v) for a, v in acc.items()}

    @cached_property
    def targets(self) -> dict[str, tuple[str, ...]]:
        """Map source -> attacked arguments, both in declaration order."""
        acc: dict[str, list[str]] = {a: [] for a in self.arguments}
        for src, tgt in self.attacks:
            acc[src].append(tgt)
        return {a: tuple(v) for a, v in acc.items()}


@dataclass(frozen=True)
class LayerAssignment:
    """Total labeling of an AF's arguments; iteration follows declaration order."""

    label: dict[str, Label]

    @cached_property
    def in_args(self) -> tuple[str, ...]:
        return tuple(a for a, lab in self.label.items() if lab is Label.IN)

    @cached_property
    def out_args(self) -> tuple[str, ...]:
        return tuple(a for a, lab in self.label.items() if lab is Label.OUT)

    @cached_property
    def undec_args(self) -> tuple[str, ...]:
        return tuple(a for a, lab in self.label.items() if lab is Label.UNDEC)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_APX_ARG = re.compile(r"^arg\(\s*([^(),\s]+)\s*\)\.$")
_APX_ATT = re.compile(r"^att\(\s*([^(),\s]+)\s*,\s*([^(),\s]+)\s*\)\.$")


def parse_af(text: str, format: str) -> ArgumentationFramework:
    """Parse instance text in one of ``iccma23``, ``apx``, ``tgf``."""
    if format == "iccma23":
        return _parse_iccma23(text)
    if format == "apx":
        return _parse_apx(text)
    if format == "tgf":
        return _parse_tgf(text)
    raise ValueError(f"unknown format {format!r}")


def _parse_iccma23(text: str) -> ArgumentationFramework:
    n: int | None = None
    attacks: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "p" or parts[1] != "af" or not parts[2].isdigit():
                raise ParseError(f"line {lineno}: expected header 'p af <n>', got {raw!r}")
            n = int(parts[2])
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"line {lineno}: expected attack '<i> <j>', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"line {lineno}: argument index out of range 1..{n}")
        attacks.append((str(i), str(j)))
    if n is None:
        raise ParseError("line 1: missing 'p af <n>' header")
    return ArgumentationFramework(tuple(str(i) for i in range(1, n + 1)), tuple(attacks))


def _parse_apx(text: str) -> ArgumentationFramework:
    args: list[str] = []
    declared: set[str] = set()
    attacks: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%") or line.startswith("#"):
            continue
        m = _APX_ARG.match(line)
        if m:
            a = m.group(1)
            if a in declared:
                raise ParseError(f"line {lineno}: duplicate argument declaration {a!r}")
            declared.add(a)
            args.append(a)
            continue
        m = _APX_ATT.match(line)
        if m:
            src, tgt = m.group(1), m.group(2)
            if src not in declared:
                raise ParseError(f"line {lineno}: attack references undeclared argument {src!r}")
            if tgt not in declared:
                raise ParseError(f"line {lineno}: attack references undeclared argument {tgt!r}")
            attacks.append((src, tgt))
            continue
        raise ParseError(f"line {lineno}: expected 'arg(x).' or 'att(x,y).', got {raw!r}")
    return ArgumentationFramework(tuple(args), tuple(attacks))


def _parse_tgf(text: str) -> ArgumentationFramework:
    args: list[str] = []
    declared: set[str] = set()
    attacks: list[tuple[str, str]] = []
    in_edges = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "#":
            if in_edges:
                raise ParseError(f"line {lineno}: repeated '#' separator")
            in_edges = True
            continue
        parts = line.split()
        if not in_edges:
            a = parts[0]
            if a in declared:
                raise ParseError(f"line {lineno}: duplicate node declaration {a!r}")
            declared.add(a)
            args.append(a)
        else:
            if len(parts) < 2:
                raise ParseError(f"line {lineno}: expected edge '<src> <tgt>', got {raw!r}")
            src, tgt = parts[0], parts[1]
            if src not in declared or tgt not in declared:
                raise ParseError(f"line {lineno}: edge references undeclared node")
            attacks.append((src, tgt))
    if not in_edges:
        raise ParseError("missing '#' separator between nodes and edges")
    return ArgumentationFramework(tuple(args), tuple(attacks))


def serialize_af(af: ArgumentationFramework, format: str) -> str:
    """Serialize in declaration order; stable byte-for-byte output."""
    if format == "iccma23":
        index = {a: i for i, a in enumerate(af.arguments, start=1)}
        lines = [f"p af {len(af.arguments)}"]
        lines += [f"{index[s]} {index[t]}" for s, t in af.attacks]
        return "\n".join(lines) + "\n"
    if format == "apx":
        lines = [f"arg({a})." for a in af.arguments]
        lines += [f"att({s},{t})." for s, t in af.attacks]
        return "\n".join(lines) + "\n"
    if format == "tgf":
        lines = list(af.arguments) + ["#"] + [f"{s} {t}" for s, t in af.attacks]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_extension(text: str, af: ArgumentationFramework) -> frozenset[str]:
    """Parse an extension file: whitespace-separated ids, or a single
    solver-style line starting with ``w``.  Unknown ids are a hard error."""
    tokens = text.split()
    if tokens and tokens[0] == "w":
        tokens = tokens[1:]
    known = set(af.arguments)
    members: set[str] = set()
    for tok in tokens:
        if tok not in known:
            raise ParseError(f"extension references unknown argument {tok!r}")
        members.add(tok)
    return frozenset(members)


# ---------------------------------------------------------------------------
# labelings and semantics
# ---------------------------------------------------------------------------


def compute_labeling(af: ArgumentationFramework, extension: frozenset[str]) -> LayerAssignment:
    """Label every argument IN, OUT, or UNDEC relative to ``extension``."""
    unknown = extension - set(af.arguments)
    if unknown:
        raise ValueError(f"extension references unknown arguments {sorted(unknown)}")
    attacked = {tgt for src, tgt in af.attacks if src in extension}
    label: dict[str, Label] = {}
    for a in af.arguments:
        if a in extension:
            label[a] = Label.IN
        elif a in attacked:
            label[a] = Label.OUT
        else:
            label[a] = Label.UNDEC
    return LayerAssignment(label)


def is_conflict_free(af: ArgumentationFramework, extension: frozenset[str]) -> bool:
    return not any(src in extension and tgt in extension for src, tgt in af.attacks)


def _defends(af: ArgumentationFramework, extension: frozenset[str], x: str) -> bool:
    attacked_by_e = {tgt for src, tgt in af.attacks if src in extension}
    return all(att in attacked_by_e for att in af.attackers[x])


def is_admissible(af: ArgumentationFramework, extension: frozenset[str]) -> bool:
    if not is_conflict_free(af, extension):
        return False
    return all(_defends(af, extension, x) for x in extension)


def is_complete(af: ArgumentationFramework, extension: frozenset[str]) -> bool:
    if not is_admissible(af, extension):
        return False
    # completeness: every argument the extension defends is already a member
    return all(not _defends(af, extension, x) or x in extension for x in af.arguments)


def is_stable(af: ArgumentationFramework, extension: frozenset[str]) -> bool:
    if not is_admissible(af, extension):
        return False
    attacked = {tgt for src, tgt in af.attacks if src in extension}
    return attacked == set(af.arguments) - extension


def grounded_extension(af: ArgumentationFramework) -> frozenset[str]:
    """Least fixed point of the defense operator, starting from the empty set."""
    current: frozenset[str] = frozenset()
    while True:
        nxt = frozenset(x for x in af.arguments if _defends(af, current, x))
        if nxt == current:
            return current
        current = nxt


_BRUTE_FORCE_LIMIT = 12


def enumerate_semantics_bruteforce(af: ArgumentationFramework, sigma: str) -> list[frozenset[str]]:
    """Enumerate all sigma-extensions by scanning every subset.

    sigma is one of ``co`` (complete), ``gr`` (grounded), ``pr`` (preferred),
    ``stable``.  Only intended as a reference oracle; refuses instances with
    more than 12 arguments.
    """
    if sigma not in ("co", "gr", "pr", "stable"):
        raise ValueError(f"unknown semantics {sigma!r}")
    n = len(af.arguments)
    if n > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"instance too large for brute force ({n} > {_BRUTE_FORCE_LIMIT} arguments)")
    subsets = [
        frozenset(itertools.compress(af.arguments, ((mask >> k) & 1 for k in range(n))))
        for mask in range(1 << n)
    ]
    if sigma == "stable":
        return [e for e in subsets if is_stable(af, e)]
    complete = [e for e in subsets if is_complete(af, e)]
    if sigma == "co":
        return complete
    if sigma == "gr":
        return [e for e in complete if not any(other < e for other in complete)]
    return [e for e in complete if not any(other > e for other in complete)]
