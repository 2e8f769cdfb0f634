"""Benchmark harness: instance adaptation, timing, optimality-gap records.

Instances are (name, framework, extension) triples.  When no extension is
supplied the grounded extension is used and the record is flagged, since
results are then not comparable against harnesses that pick a different
extension.  Sizes are measured as |A| + |R|: total arguments plus attacks.

The ratio column is heuristic objective / exact objective, defined only
when the exact solver proved an optimum with a nonzero objective; for a
zero optimum the heuristic's absolute crossing count is recorded instead.
Buckets for the summary default to sizes 0-100, 101-300, and above 300.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass
from pathlib import Path

from .af import (
    ArgumentationFramework,
    compute_labeling,
    grounded_extension,
    is_conflict_free,
    parse_af,
    parse_extension,
)
from .exact import SolveStatus, solve_exact
from .heuristic import PipelineConfig, run_pipeline
from .layout import partition_edges

CSV_COLUMNS = (
    "instance", "size", "n_in", "n_out", "n_undec", "two_layer",
    "grounded_fallback", "heuristic_ms", "heuristic_objective",
    "exact_ms", "exact_status", "exact_objective", "ratio",
    "absolute_crossings",
)


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    size: int
    n_in: int
    n_out: int
    n_undec: int
    two_layer: bool
    grounded_fallback: bool
    heuristic_ms: float
    heuristic_objective: int
    exact_ms: float | None
    exact_status: str | None
    exact_objective: int | None
    ratio: float | None
    absolute_crossings: int | None

    def __post_init__(self) -> None:
        # ratio present iff the exact run produced a nonzero objective;
        # a zero objective records absolute heuristic crossings instead
        if self.exact_objective is None:
            if self.ratio is not None or self.absolute_crossings is not None:
                raise ValueError("ratio/absolute require an exact run")
        elif (self.ratio is not None) != (self.exact_objective != 0):
            raise ValueError("ratio must be present iff the exact objective is nonzero")


@dataclass(frozen=True)
class BenchConfig:
    exact_timeout_ms: int = 60_000
    exact_size_cap: int = 150  # skip the exact solver above this |A|+|R|
    rec: bool = True
    strategy: str = "A"
    seed: int = 0
    buckets: tuple[tuple[int, int | None], ...] = ((0, 100), (101, 300), (301, None))


def adapt_instance(
    af: ArgumentationFramework,
    target_vertices: int,
    target_edges: int,
    seed: int,
) -> ArgumentationFramework:
    """Shrink af toward the targets by uniform random removal, seeded.

    Vertices are removed first, each taking its incident attacks along, so
    the vertex target is met exactly while the attack count may already
    fall below its target; any surplus attacks are then removed.
    """
    if target_vertices > len(af.arguments) or target_edges > len(af.attacks):
        raise ValueError("targets exceed the current instance size")
    if target_vertices < 0 or target_edges < 0:
        raise ValueError("targets must be non-negative")
    rng = random.Random(seed)
    args = list(af.arguments)
    attacks = list(af.attacks)
    while len(args) > target_vertices:
        victim = args.pop(rng.randrange(len(args)))
        attacks = [(s, t) for s, t in attacks if s != victim and t != victim]
    while len(attacks) > target_edges:
        attacks.pop(rng.randrange(len(attacks)))
    return ArgumentationFramework(tuple(args), tuple(attacks))


SUFFIX_FORMAT = {".apx": "apx", ".tgf": "tgf", ".af": "iccma23"}


def discover_instances(
    directory: str | Path,
) -> list[tuple[str, ArgumentationFramework, frozenset[str] | None]]:
    """Scan a directory for instance files plus optional ``.ext`` companions.

    Recognized suffixes: .apx, .tgf, .af (numeric format).  A file
    ``<stem>.ext`` next to an instance supplies its extension; without one
    the benchmark falls back to the grounded extension.
    """
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"instance directory not found: {root}")
    found = []
    for path in sorted(root.iterdir()):
        fmt = SUFFIX_FORMAT.get(path.suffix)
        if fmt is None:
            continue
        af = parse_af(path.read_text(), fmt)
        ext_path = path.with_suffix(".ext")
        extension = parse_extension(ext_path.read_text(), af) if ext_path.exists() else None
        found.append((path.stem, af, extension))
    return found


def run_instance(
    name: str,
    af: ArgumentationFramework,
    extension: frozenset[str] | None,
    config: BenchConfig,
) -> BenchRecord:
    grounded_fallback = extension is None
    extension = grounded_extension(af) if extension is None else frozenset(extension)
    if not is_conflict_free(af, extension):
        raise ValueError(f"instance {name!r}: extension is not conflict-free")
    size = len(af.arguments) + len(af.attacks)
    labeling = compute_labeling(af, extension)
    layers = (labeling.in_args, labeling.out_args, labeling.undec_args)

    t0 = time.monotonic()
    _, h_report, _ = run_pipeline(af, extension, PipelineConfig(
        red_strategy=config.strategy, seed=config.seed))
    heuristic_ms = (time.monotonic() - t0) * 1000.0

    exact_ms: float | None = None
    exact_status: str | None = None
    exact_objective: int | None = None
    ratio: float | None = None
    absolute: int | None = None
    if size <= config.exact_size_cap:
        partition = partition_edges(af, labeling)
        t0 = time.monotonic()
        result = solve_exact(partition, layers, config.rec, config.exact_timeout_ms)
        exact_ms = (time.monotonic() - t0) * 1000.0
        exact_status = result.status.value
        exact_objective = result.report.weighted_objective
        if exact_objective > 0:
            ratio = h_report.weighted_objective / exact_objective
        else:
            rep = h_report
            absolute = rep.c1 + rep.c2 + rep.c3 + rep.c4

    return BenchRecord(
        instance=name,
        size=size,
        n_in=len(layers[0]),
        n_out=len(layers[1]),
        n_undec=len(layers[2]),
        two_layer=not layers[2],
        grounded_fallback=grounded_fallback,
        heuristic_ms=heuristic_ms,
        heuristic_objective=h_report.weighted_objective,
        exact_ms=exact_ms,
        exact_status=exact_status,
        exact_objective=exact_objective,
        ratio=ratio,
        absolute_crossings=absolute,
    )


def run_benchmark(
    instances: list[tuple[str, ArgumentationFramework, frozenset[str] | None]],
    config: BenchConfig | None = None,
) -> list[BenchRecord]:
    """Run every instance and return records sorted by instance name."""
    config = config or BenchConfig()
    records = [run_instance(name, af, ext, config) for name, af, ext in instances]
    records.sort(key=lambda r: r.instance)
    return records


def to_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.instance, r.size, r.n_in, r.n_out, r.n_undec,
            int(r.two_layer), int(r.grounded_fallback),
            f"{r.heuristic_ms:.3f}", r.heuristic_objective,
            "" if r.exact_ms is None else f"{r.exact_ms:.3f}",
            r.exact_status or "",
            "" if r.exact_objective is None else r.exact_objective,
            "" if r.ratio is None else f"{r.ratio:.4f}",
            "" if r.absolute_crossings is None else r.absolute_crossings,
        ])
    return buf.getvalue()


def _bucket_label(lo: int, hi: int | None) -> str:
    return f"{lo}-{hi}" if hi is not None else f">{lo - 1}"


def summarize(records: list[BenchRecord], config: BenchConfig | None = None) -> str:
    """Human-readable table: per-bucket mean times and the ratio spread."""
    config = config or BenchConfig()
    lines = []
    header = f"{'bucket':>10} {'count':>6} {'heur ms':>10} {'exact ms':>10} {'mean ratio':>11}"
    lines.append(header)
    lines.append("-" * len(header))
    for lo, hi in config.buckets:
        rows = [r for r in records if r.size >= lo and (hi is None or r.size <= hi)]
        label = _bucket_label(lo, hi)
        if not rows:
            lines.append(f"{label:>10} {0:>6} {'-':>10} {'-':>10} {'-':>11}")
            continue
        h_mean = sum(r.heuristic_ms for r in rows) / len(rows)
        exact_rows = [r for r in rows if r.exact_ms is not None]
        e_mean = (sum(r.exact_ms for r in exact_rows) / len(exact_rows)
                  if exact_rows else None)
        ratios = [r.ratio for r in rows if r.ratio is not None]
        r_mean = sum(ratios) / len(ratios) if ratios else None
        lines.append(
            f"{label:>10} {len(rows):>6} {h_mean:>10.2f} "
            f"{'-' if e_mean is None else f'{e_mean:>.2f}':>10} "
            f"{'-' if r_mean is None else f'{r_mean:>.3f}':>11}")
    zero_opt = [r for r in records if r.absolute_crossings is not None
                and r.exact_status == "OPTIMAL"]
    if zero_opt:
        lines.append(f"zero-optimum instances: {len(zero_opt)} "
                     f"(absolute heuristic crossings recorded)")
    return "\n".join(lines) + "\n"
