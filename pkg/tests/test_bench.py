"""Benchmark harness: records, adaptation, discovery, CSV."""
from __future__ import annotations

import csv
import io
import random
from pathlib import Path

import pytest

from aflayout.af import grounded_extension, serialize_af
from aflayout.bench import (
    CSV_COLUMNS,
    BenchConfig,
    BenchRecord,
    adapt_instance,
    discover_instances,
    run_benchmark,
    run_instance,
    summarize,
    to_csv,
)
from aflayout.generators import random_af, rec_neutral_family


def _record(**overrides):
    base = dict(
        instance="x", size=10, n_in=2, n_out=2, n_undec=1, two_layer=False,
        grounded_fallback=False, heuristic_ms=1.0, heuristic_objective=3,
        exact_ms=2.0, exact_status="OPTIMAL", exact_objective=3,
        ratio=1.0, absolute_crossings=None,
    )
    base.update(overrides)
    return BenchRecord(**base)


# ---------------------------------------------------------------------------
# record invariants
# ---------------------------------------------------------------------------


def test_record_accepts_the_three_legal_shapes():
    _record()
    _record(exact_objective=0, ratio=None, absolute_crossings=5)
    _record(exact_ms=None, exact_status=None, exact_objective=None,
            ratio=None, absolute_crossings=None)


def test_record_rejects_ratio_without_exact_run():
    with pytest.raises(ValueError, match="exact run"):
        _record(exact_ms=None, exact_status=None, exact_objective=None,
                absolute_crossings=None)


def test_record_rejects_ratio_for_zero_optimum():
    with pytest.raises(ValueError, match="nonzero"):
        _record(exact_objective=0, ratio=1.0)
    with pytest.raises(ValueError, match="nonzero"):
        _record(exact_objective=4, ratio=None)


# ---------------------------------------------------------------------------
# adaptation
# ---------------------------------------------------------------------------


def test_adapt_hits_the_targets_and_is_deterministic():
    af = random_af(40, 120, seed=1)
    small = adapt_instance(af, 25, 50, seed=9)
    # the vertex target is exact; attacks may fall below the target because
    # removed vertices take their incident attacks along
    assert len(small.arguments) == 25
    assert len(small.attacks) <= 50
    assert small == adapt_instance(af, 25, 50, seed=9)
    assert set(small.arguments) <= set(af.arguments)
    assert set(small.attacks) <= set(af.attacks)
    for s, t in small.attacks:
        assert s in set(small.arguments) and t in set(small.arguments)
    trimmed = adapt_instance(af, 40, 80, seed=9)
    assert len(trimmed.attacks) == 80  # no vertex removed, so exact


def test_adapt_can_differ_by_seed():
    af = random_af(40, 120, seed=1)
    variants = {adapt_instance(af, 20, 30, seed=k).attacks for k in range(6)}
    assert len(variants) > 1


def test_adapt_rejects_impossible_targets():
    af = random_af(10, 12, seed=0)
    with pytest.raises(ValueError, match="exceed"):
        adapt_instance(af, 11, 5, seed=0)
    with pytest.raises(ValueError, match="exceed"):
        adapt_instance(af, 5, 13, seed=0)
    with pytest.raises(ValueError, match="non-negative"):
        adapt_instance(af, -1, 5, seed=0)


def test_adapt_may_drop_attacks_with_removed_vertices():
    af = random_af(12, 30, seed=3)
    # removing 6 vertices takes incident attacks along; the attack target
    # may then be unreachable, which must error rather than under-deliver
    small = adapt_instance(af, 6, 5, seed=2)
    assert len(small.attacks) == 5


# ---------------------------------------------------------------------------
# discovery and the full run
# ---------------------------------------------------------------------------


def test_discovery_reads_all_formats_and_extensions(tmp_path):
    af1 = random_af(6, 8, seed=4)
    (tmp_path / "one.apx").write_text(serialize_af(af1, "apx"), encoding="utf-8")
    (tmp_path / "one.ext").write_text(
        " ".join(sorted(grounded_extension(af1))), encoding="utf-8")
    af2 = random_af(5, 5, seed=5)
    (tmp_path / "two.tgf").write_text(serialize_af(af2, "tgf"), encoding="utf-8")
    af3 = random_af(4, 4, seed=6)
    (tmp_path / "three.af").write_text(serialize_af(af3, "iccma23"), encoding="utf-8")
    (tmp_path / "ignore.txt").write_text("not an instance", encoding="utf-8")

    found = discover_instances(tmp_path)
    assert [name for name, _, _ in found] == ["one", "three", "two"]
    by_name = {name: (af, ext) for name, af, ext in found}
    assert by_name["one"][0] == af1
    assert by_name["one"][1] == grounded_extension(af1)
    assert by_name["two"][1] is None
    assert by_name["three"][0].arguments == tuple(str(k) for k in range(1, 5))


def test_discovery_requires_a_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        discover_instances(tmp_path / "missing")


def test_run_instance_with_exact_solver_populates_gap_fields():
    af, ext = rec_neutral_family(3, pad_u=1, pad_v=1, seed=2)
    rec = run_instance("neutral", af, frozenset(ext), BenchConfig())
    assert rec.size == len(af.arguments) + len(af.attacks)
    assert rec.exact_status == "OPTIMAL"
    assert rec.exact_objective == 3
    assert rec.ratio is not None and rec.ratio >= 1.0
    assert rec.two_layer  # the family has no undecided arguments
    assert not rec.grounded_fallback


def test_run_instance_above_the_cap_skips_exact():
    af = random_af(60, 150, seed=7)
    rec = run_instance("big", af, None, BenchConfig(exact_size_cap=100))
    assert rec.grounded_fallback
    assert rec.exact_ms is None
    assert rec.exact_status is None
    assert rec.ratio is None and rec.absolute_crossings is None


def test_run_instance_rejects_conflicting_extension():
    af = random_af(6, 10, seed=8)
    bad = frozenset(af.arguments)
    with pytest.raises(ValueError, match="conflict-free"):
        run_instance("bad", af, bad, BenchConfig())


def test_zero_optimum_records_absolute_crossings():
    af, ext = rec_neutral_family(1, pad_u=2, pad_v=2, seed=0)
    rec = run_instance("tiny", af, frozenset(ext), BenchConfig())
    assert rec.exact_objective == 0
    assert rec.ratio is None
    assert rec.absolute_crossings is not None


def test_benchmark_sorts_records_and_csv_round_trips():
    instances = []
    for k, (n, m) in enumerate([(8, 12), (6, 9), (10, 14)]):
        af = random_af(n, m, seed=k)
        instances.append((f"inst_{2 - k}", af, None))
    records = run_benchmark(instances, BenchConfig(exact_timeout_ms=5_000))
    assert [r.instance for r in records] == ["inst_0", "inst_1", "inst_2"]

    text = to_csv(records)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == len(records) + 1
    for row, rec in zip(rows[1:], records):
        assert row[0] == rec.instance
        assert int(row[1]) == rec.size
        assert int(row[6]) == int(rec.grounded_fallback)
        assert int(row[8]) == rec.heuristic_objective
        if rec.ratio is not None:
            assert abs(float(row[12]) - rec.ratio) < 1e-4
        else:
            assert row[12] == ""
        # the gap is recomputable from the stored objectives
        if rec.exact_objective not in (None, 0):
            assert abs(float(row[12]) - int(row[8]) / int(row[11])) < 1e-4


def test_summary_has_one_line_per_bucket():
    af = random_af(12, 18, seed=11)
    records = run_benchmark([("a", af, None)], BenchConfig())
    out = summarize(records, BenchConfig())
    lines = out.splitlines()
    assert lines[0].split() == ["bucket", "count", "heur", "ms", "exact", "ms", "mean", "ratio"]
    assert len([l for l in lines if l and not l.startswith("-")]) >= 4
