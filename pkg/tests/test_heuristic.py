"""Heuristic pipeline: constraint preservation, determinism, improvement."""
from __future__ import annotations

import random
from dataclasses import replace

import pytest

from aflayout.af import ArgumentationFramework, compute_labeling, grounded_extension
from aflayout.annotate import RedSelectionError
from aflayout.generators import random_af, random_layered_instance, rec_neutral_family
from aflayout.heuristic import (
    NonConflictFreeError,
    PipelineConfig,
    apply_barycenter_sequence,
    local_search_adjacent,
    optimize_drawing,
    run_pipeline,
    undec_sweeps,
)
from aflayout.layout import (
    LayeredDrawing,
    count_crossings,
    partition_edges,
    satisfies_rec,
    validate_drawing,
)


def _layered_start(seed, **kwargs):
    af, labeling, partition, (in_ids, out_ids, undec_ids) = random_layered_instance(
        seed, **kwargs)
    start = LayeredDrawing(in_order=in_ids, out_order=out_ids,
                           undec_order=undec_ids, red_edges={})
    return af, labeling, partition, start


def _scrambled(drawing, partition, seed):
    """REC-respecting scramble: group OUT by source, align source order."""
    rng = random.Random(seed)
    if not drawing.red_edges:
        return replace(
            drawing,
            in_order=tuple(rng.sample(drawing.in_order, len(drawing.in_order))),
            undec_order=tuple(rng.sample(drawing.undec_order, len(drawing.undec_order))),
        )
    groups: dict[str, list[str]] = {}
    for t in drawing.out_order:
        groups.setdefault(drawing.red_edges[t], []).append(t)
    srcs = list(groups)
    rng.shuffle(srcs)
    out_order = tuple(t for s in srcs for t in groups[s])
    rest = [a for a in drawing.in_order if a not in groups]
    rng.shuffle(rest)
    slots = [True] * len(rest) + [False] * len(srcs)
    rng.shuffle(slots)
    it, k = iter(rest), 0
    in_order = []
    for take_rest in slots:
        if take_rest:
            in_order.append(next(it))
        else:
            in_order.append(srcs[k])
            k += 1
    return replace(
        drawing, in_order=tuple(in_order), out_order=out_order,
        undec_order=tuple(rng.sample(drawing.undec_order, len(drawing.undec_order))))


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def test_config_rejects_bad_values():
    with pytest.raises(ValueError, match="red_strategy"):
        PipelineConfig(red_strategy="C")
    with pytest.raises(ValueError, match="max_rounds"):
        PipelineConfig(max_rounds=0)
    with pytest.raises(ValueError, match="seed"):
        PipelineConfig(seed=-1)
    with pytest.raises(ValueError, match="restarts"):
        PipelineConfig(restarts=-1)


# ---------------------------------------------------------------------------
# end-to-end pipeline
# ---------------------------------------------------------------------------


def test_pipeline_rejects_conflicting_extension():
    af = ArgumentationFramework(("a", "b"), (("a", "b"),))
    with pytest.raises(NonConflictFreeError):
        run_pipeline(af, frozenset({"a", "b"}))


@pytest.mark.parametrize("strategy", ["A", "B"])
def test_pipeline_output_is_valid_and_respects_red_constraint(strategy):
    for seed in range(60):
        af = random_af(14, 24, seed=seed)
        ext = grounded_extension(af)
        drawing, report, annotations = run_pipeline(
            af, ext, PipelineConfig(red_strategy=strategy))
        labeling = compute_labeling(af, ext)
        validate_drawing(drawing, af, labeling)
        assert satisfies_rec(drawing)
        assert report.rec_violations == 0
        partition = partition_edges(af, labeling)
        again = count_crossings(drawing, partition)
        assert again == report
        assert set(annotations.edge_class) == set(af.attacks)
        assert set(annotations.argument_class) == set(af.arguments)


def test_pipeline_is_deterministic():
    af = random_af(18, 30, seed=9)
    ext = grounded_extension(af)
    for config in (PipelineConfig(), PipelineConfig(seed=7),
                   PipelineConfig(red_strategy="B", seed=3)):
        d1, r1, _ = run_pipeline(af, ext, config)
        d2, r2, _ = run_pipeline(af, ext, config)
        assert d1.in_order == d2.in_order
        assert d1.out_order == d2.out_order
        assert d1.undec_order == d2.undec_order
        assert d1.red_edges == d2.red_edges
        assert r1 == r2


def test_pipeline_achieves_known_optimum_on_doubly_attacked_family():
    for k in (2, 3, 4, 5):
        af, ext = rec_neutral_family(k, pad_u=2, pad_v=2, seed=k)
        _, report, _ = run_pipeline(af, frozenset(ext))
        assert report.weighted_objective == k * (k - 1) // 2


def test_uncovered_out_argument_raises():
    af, labeling, partition, start = _layered_start(0, max_layer=4, max_attacks=0)
    if not start.out_order:
        af, labeling, partition, start = _layered_start(3, max_layer=4, max_attacks=0)
    assert start.out_order
    with pytest.raises(RedSelectionError):
        optimize_drawing(start, partition, PipelineConfig())


def test_polish_gate_and_restarts_settings_keep_output_valid():
    for seed in (1, 5, 11):
        af, labeling, partition, start = _layered_start(
            seed, max_layer=6, max_attacks=18, ensure_covered=True)
        for config in (PipelineConfig(polish_size_cap=0),
                       PipelineConfig(restarts=0),
                       PipelineConfig(restarts=7, seed=2)):
            drawing, report = optimize_drawing(start, partition, config)
            validate_drawing(drawing, af, labeling)
            assert satisfies_rec(drawing)


def test_more_restarts_never_hurt_before_final_stage():
    # the restart set always contains the plain start, so the best
    # pre-polish objective is monotone; end-to-end results stay close
    for seed in (0, 4, 9, 13):
        af, labeling, partition, start = _layered_start(
            seed, max_layer=7, max_attacks=25, ensure_covered=True)
        base = optimize_drawing(start, partition, PipelineConfig(restarts=0))[1]
        more = optimize_drawing(start, partition, PipelineConfig(restarts=6))[1]
        assert more.weighted_objective <= base.weighted_objective + 2


# ---------------------------------------------------------------------------
# individual passes preserve the red-edge constraint
# ---------------------------------------------------------------------------


def _pipeline_drawings(max_seed):
    for seed in range(max_seed):
        af = random_af(12, 20, seed=seed)
        ext = grounded_extension(af)
        drawing, _, _ = run_pipeline(af, ext)
        labeling = compute_labeling(af, ext)
        partition = partition_edges(af, labeling)
        yield af, labeling, partition, drawing


def test_barycenter_sequence_preserves_constraint_and_layers():
    for af, labeling, partition, drawing in _pipeline_drawings(40):
        probe = _scrambled(drawing, partition, 77)
        assert satisfies_rec(probe)
        out = apply_barycenter_sequence(probe, partition)
        validate_drawing(out, af, labeling)
        assert satisfies_rec(out)


def test_undec_sweeps_touch_only_the_undec_layer():
    for af, labeling, partition, drawing in _pipeline_drawings(40):
        out = undec_sweeps(drawing, partition)
        assert out.in_order == drawing.in_order
        assert out.out_order == drawing.out_order
        assert sorted(out.undec_order) == sorted(drawing.undec_order)
        assert satisfies_rec(out)


def test_adjacent_polish_never_worsens_and_keeps_constraint():
    for af, labeling, partition, drawing in _pipeline_drawings(60):
        probe = _scrambled(drawing, partition, 13)
        before = count_crossings(probe, partition).weighted_objective
        polished = local_search_adjacent(probe, partition)
        after = count_crossings(polished, partition).weighted_objective
        assert after <= before
        validate_drawing(polished, af, labeling)
        assert satisfies_rec(polished)
